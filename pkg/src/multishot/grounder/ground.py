"""Ground program representation and the text dump format."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..language.terms import Atom

AUX_PREDICATE = "__aux"


def is_aux(a: Atom) -> bool:
    return a.predicate.startswith("__")


@dataclass(frozen=True)
class AtomBase:
    atoms: frozenset = frozenset()
    facts: frozenset = frozenset()

    def __post_init__(self):
        if not self.facts <= self.atoms:
            raise ValueError("facts must be a subset of atoms")


@dataclass(frozen=True, slots=True, eq=True)
class GroundRule:
    """Normal rule (head set), constraint (head None) or choice (choice=True)."""

    head: Optional[Atom]
    pos: tuple = ()
    neg: tuple = ()
    choice: bool = False
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.head, self.pos, self.neg, self.choice)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def kind(self) -> str:
        if self.head is None:
            return "constraint"
        return "choice" if self.choice else "normal"

    def atoms(self):
        if self.head is not None:
            yield self.head
        yield from self.pos
        yield from self.neg

    def sort_key(self) -> tuple:
        kinds = {"normal": 0, "choice": 1, "constraint": 2}
        return (kinds[self.kind], self.head.key() if self.head is not None else (),
                tuple(a.key() for a in self.pos), tuple(a.key() for a in self.neg))

    def __str__(self) -> str:
        body = [str(a) for a in self.pos] + [f"not {a}" for a in self.neg]
        if self.head is None:
            return ":- " + ", ".join(body) + "." if body else ":- ."
        h = "{" + str(self.head) + "}" if self.choice else str(self.head)
        return f"{h} :- {', '.join(body)}." if body else f"{h}."

    def __repr__(self) -> str:
        return f"GroundRule({self})"


def _canon(atoms) -> tuple:
    if not atoms:
        return ()
    if len(atoms) == 1:
        return tuple(atoms)
    return tuple(sorted(set(atoms), key=Atom.key))


def normal(head: Atom, pos=(), neg=()) -> GroundRule:
    return GroundRule(head, _canon(pos), _canon(neg), False)


def constraint(pos=(), neg=()) -> GroundRule:
    return GroundRule(None, _canon(pos), _canon(neg), False)


def choice(head: Atom, pos=(), neg=()) -> GroundRule:
    return GroundRule(head, _canon(pos), _canon(neg), True)


def make_rule(head, pos=(), neg=(), is_choice=False) -> GroundRule:
    return GroundRule(head, _canon(pos), _canon(neg), bool(is_choice) and head is not None)


def heads(rules) -> set:
    return {r.head for r in rules if r.head is not None}


@dataclass(frozen=True)
class MinimizeGroundElement:
    weight: int
    priority: int
    tuple: tuple = ()
    pos: tuple = ()
    neg: tuple = ()

    @property
    def key(self) -> tuple:
        return (self.weight, self.priority, self.tuple)

    def __str__(self):
        s = f"{self.weight}@{self.priority}"
        for t in self.tuple:
            s += f",{t}"
        cond = [str(a) for a in self.pos] + [f"not {a}" for a in self.neg]
        if cond:
            s += " : " + ", ".join(cond)
        return s


@dataclass(frozen=True)
class GroundProgramWithExternals:
    rules: tuple = ()
    externals: frozenset = frozenset()
    base_out: AtomBase = AtomBase()

    def heads(self) -> set:
        return heads(self.rules)


@dataclass(frozen=True)
class GroundingResult:
    program: GroundProgramWithExternals
    minimize: tuple = ()
    shows: tuple = ()
    warnings: tuple = ()

    # allow `prog, mins, shows = instantiate(...)`
    def __iter__(self):
        return iter((self.program, self.minimize, self.shows))


def sort_rules(rules) -> list:
    return sorted(rules, key=GroundRule.sort_key)


def dump_rules(rules, externals=(), inputs=()) -> str:
    """Deterministic text dump: rules by kind, then externals and inputs."""
    lines = [str(r) for r in sort_rules(rules)]
    lines += [f"#external {a}." for a in sorted(externals, key=Atom.key)]
    lines += [f"#input {a}." for a in sorted(inputs, key=Atom.key)]
    return "\n".join(lines) + ("\n" if lines else "")
