"""Terms and atoms of the input language.

Ground terms are ordered Integer < SymbolicConst < Function; integers
numerically, constants by name, functions by (name, arity, args).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator


class Term:
    __slots__ = ()

    def is_ground(self) -> bool:
        raise NotImplementedError

    def variables(self) -> Iterator[str]:
        return iter(())

    def key(self) -> tuple:
        raise TypeError(f"non-ground term has no order: {self}")

    def __lt__(self, other: "Term") -> bool:
        return self.key() < other.key()

    def __le__(self, other: "Term") -> bool:
        return self.key() <= other.key()

    def __gt__(self, other: "Term") -> bool:
        return self.key() > other.key()

    def __ge__(self, other: "Term") -> bool:
        return self.key() >= other.key()


@dataclass(frozen=True, slots=True, eq=True, order=False)
class Number(Term):
    value: int

    def is_ground(self) -> bool:
        return True

    def key(self) -> tuple:
        return (0, self.value)

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True, eq=True, order=False)
class SymbolicConst(Term):
    name: str

    def is_ground(self) -> bool:
        return True

    def key(self) -> tuple:
        return (1, self.name)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True, eq=True, order=False)
class Variable(Term):
    name: str

    def is_ground(self) -> bool:
        return False

    def variables(self):
        yield self.name

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True, eq=True, order=False)
class Function(Term):
    name: str
    args: tuple
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    _ground: bool = field(init=False, repr=False, compare=False, default=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.name, self.args)))
        object.__setattr__(self, "_ground", all(a.is_ground() for a in self.args))

    def __hash__(self) -> int:
        return self._hash

    def is_ground(self) -> bool:
        return self._ground

    def variables(self):
        for a in self.args:
            yield from a.variables()

    def key(self) -> tuple:
        return (2, self.name, len(self.args), tuple(a.key() for a in self.args))

    def __str__(self) -> str:
        return f"{self.name}({_render_args(self.args)})"


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "\\": 2}


@dataclass(frozen=True, slots=True, eq=True, order=False)
class BinaryOp(Term):
    op: str
    lhs: Term
    rhs: Term

    def is_ground(self) -> bool:
        return False

    def variables(self):
        yield from self.lhs.variables()
        yield from self.rhs.variables()

    def __str__(self) -> str:
        p = _PREC[self.op]
        left = _paren(self.lhs, p, right=False)
        right = _paren(self.rhs, p, right=True)
        return f"{left}{self.op}{right}"


@dataclass(frozen=True, slots=True, eq=True, order=False)
class UnaryMinus(Term):
    arg: Term

    def is_ground(self) -> bool:
        return False

    def variables(self):
        yield from self.arg.variables()

    def __str__(self) -> str:
        inner = str(self.arg)
        if isinstance(self.arg, (BinaryOp, UnaryMinus, Interval, Pool)) or (
            isinstance(self.arg, Number) and self.arg.value < 0
        ):
            inner = f"({inner})"
        return f"-{inner}"


@dataclass(frozen=True, slots=True, eq=True, order=False)
class Interval(Term):
    lo: Term
    hi: Term

    def is_ground(self) -> bool:
        return False

    def variables(self):
        yield from self.lo.variables()
        yield from self.hi.variables()

    def __str__(self) -> str:
        return f"{_paren_interval(self.lo)}..{_paren_interval(self.hi)}"


@dataclass(frozen=True, slots=True, eq=True, order=False)
class Pool(Term):
    alternatives: tuple

    def is_ground(self) -> bool:
        return False

    def variables(self):
        for a in self.alternatives:
            yield from a.variables()

    def __str__(self) -> str:
        return "(" + ";".join(str(a) for a in self.alternatives) + ")"


def _paren(t: Term, prec: int, right: bool) -> str:
    s = str(t)
    if isinstance(t, BinaryOp):
        q = _PREC[t.op]
        if q < prec or (right and q == prec):
            return f"({s})"
    elif isinstance(t, (Interval, Pool)):
        return f"({s})" if not isinstance(t, Pool) else s
    elif isinstance(t, Number) and t.value < 0 and right:
        return f"({s})"
    return s


def _paren_interval(t: Term) -> str:
    return f"({t})" if isinstance(t, Interval) else str(t)


def _render_args(args) -> str:
    # a lone pool argument is written p(a;b) rather than p((a;b))
    if len(args) == 1 and isinstance(args[0], Pool):
        return ";".join(str(a) for a in args[0].alternatives)
    return ",".join(str(a) for a in args)


@dataclass(frozen=True, slots=True, eq=True, order=False)
class Atom:
    predicate: str
    args: tuple = ()
    _hash: int = field(init=False, repr=False, compare=False, default=0)
    _key: tuple = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.predicate, self.args)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    def is_ground(self) -> bool:
        return all(a.is_ground() for a in self.args)

    def variables(self):
        for a in self.args:
            yield from a.variables()

    def key(self) -> tuple:
        k = self._key
        if k is None:
            k = (self.predicate, len(self.args), tuple(a.key() for a in self.args))
            object.__setattr__(self, "_key", k)
        return k

    def __lt__(self, other: "Atom") -> bool:
        return self.key() < other.key()

    def __le__(self, other: "Atom") -> bool:
        return self.key() <= other.key()

    def __gt__(self, other: "Atom") -> bool:
        return self.key() > other.key()

    def __ge__(self, other: "Atom") -> bool:
        return self.key() >= other.key()

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({_render_args(self.args)})"

    def __repr__(self) -> str:
        return f"Atom({self})"


def sorted_atoms(atoms) -> list:
    return sorted(atoms, key=Atom.key)


def term_from_value(v) -> Term:
    """Build a ground term from a python int/str/tuple shorthand."""
    if isinstance(v, Term):
        return v
    if isinstance(v, bool):
        raise TypeError("bool is not a term")
    if isinstance(v, int):
        return Number(v)
    if isinstance(v, str):
        return SymbolicConst(v)
    if isinstance(v, tuple) and v and isinstance(v[0], str):
        return Function(v[0], tuple(term_from_value(a) for a in v[1:]))
    raise TypeError(f"cannot convert {v!r} to a term")
