"""Subprogram tables and parameter substitution."""
from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (
    AggregateElement, ChoiceElement, ChoiceRule, Comparison, Constraint, CountAggregate,
    ExternalDecl, Literal, MinimizeDecl, NormalRule, ProgramDecl, ShowDecl,
)
from .terms import Atom, BinaryOp, Function, Interval, Pool, SymbolicConst, Term, UnaryMinus


class ArityError(ValueError):
    pass


@dataclass(frozen=True)
class Subprogram:
    params: tuple = ()
    statements: tuple = ()


@dataclass(frozen=True)
class SubprogramTable:
    entries: tuple = (("base", Subprogram()),)
    _index: dict = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", dict(self.entries))

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __getitem__(self, name: str) -> Subprogram:
        return self._index[name]

    def names(self) -> list:
        return [n for n, _ in self.entries]

    def merge(self, other: "SubprogramTable") -> "SubprogramTable":
        """Per-name union (order preserving, duplicates dropped)."""
        merged = dict(self._index)
        for name, sub in other.entries:
            if name in merged:
                old = merged[name]
                if old.params != sub.params:
                    raise ArityError(
                        f"program {name!r} redeclared with parameters {sub.params}, previously {old.params}")
                stmts = list(old.statements)
                seen = set(stmts)
                for s in sub.statements:
                    if s not in seen:
                        seen.add(s)
                        stmts.append(s)
                merged[name] = Subprogram(old.params, tuple(stmts))
            else:
                merged[name] = sub
        return SubprogramTable(tuple(sorted(merged.items(), key=_table_order)))


def _table_order(item):
    # base first, then alphabetical; keeps structural equality order-independent
    return (item[0] != "base", item[0])


def split_subprograms(stmts) -> SubprogramTable:
    """Assign each statement to the nearest preceding #program scope."""
    scopes: dict[str, list] = {"base": []}
    params: dict[str, tuple] = {"base": ()}
    current = "base"
    for st in stmts:
        if isinstance(st, ProgramDecl):
            if st.name in params and params[st.name] != st.params:
                raise ArityError(
                    f"program {st.name!r} redeclared with parameters {st.params}, previously {params[st.name]}")
            params[st.name] = st.params
            scopes.setdefault(st.name, [])
            current = st.name
            continue
        bucket = scopes[current]
        if st not in bucket:
            bucket.append(st)
    entries = {n: Subprogram(params[n], tuple(scopes[n])) for n in scopes}
    return SubprogramTable(tuple(sorted(entries.items(), key=_table_order)))


# substitution

def subst_term(t: Term, mapping: dict) -> Term:
    if isinstance(t, SymbolicConst):
        return mapping.get(t.name, t)
    if isinstance(t, Function):
        args = tuple(subst_term(a, mapping) for a in t.args)
        return t if args == t.args else Function(t.name, args)
    if isinstance(t, BinaryOp):
        return BinaryOp(t.op, subst_term(t.lhs, mapping), subst_term(t.rhs, mapping))
    if isinstance(t, UnaryMinus):
        return UnaryMinus(subst_term(t.arg, mapping))
    if isinstance(t, Interval):
        return Interval(subst_term(t.lo, mapping), subst_term(t.hi, mapping))
    if isinstance(t, Pool):
        return Pool(tuple(subst_term(a, mapping) for a in t.alternatives))
    return t


def _atom(a: Atom, m: dict) -> Atom:
    return Atom(a.predicate, tuple(subst_term(x, m) for x in a.args))


def _lit(lit: Literal, m: dict) -> Literal:
    c = lit.content
    if isinstance(c, Comparison):
        return Literal(Comparison(c.op, subst_term(c.lhs, m), subst_term(c.rhs, m)), lit.negated)
    return Literal(_atom(c, m), lit.negated)


def _lits(lits, m):
    return tuple(_lit(x, m) for x in lits)


def _body(body, m):
    out = []
    for b in body:
        if isinstance(b, CountAggregate):
            elems = tuple(AggregateElement(tuple(subst_term(t, m) for t in e.terms), _lits(e.condition, m))
                          for e in b.elements)
            out.append(CountAggregate(b.op, subst_term(b.bound, m), elems))
        else:
            out.append(_lit(b, m))
    return tuple(out)


def substitute_statement(st, mapping: dict):
    if not mapping:
        return st
    m = mapping
    if isinstance(st, NormalRule):
        return NormalRule(_atom(st.head, m), _body(st.body, m))
    if isinstance(st, Constraint):
        return Constraint(_body(st.body, m))
    if isinstance(st, ChoiceRule):
        elems = tuple(ChoiceElement(_atom(e.atom, m), _lits(e.condition, m)) for e in st.elements)
        return ChoiceRule(st.lb, elems, st.ub, _body(st.body, m))
    if isinstance(st, ExternalDecl):
        return ExternalDecl(_atom(st.atom, m), _lits(st.body, m))
    if isinstance(st, MinimizeDecl):
        return MinimizeDecl(subst_term(st.weight, m), subst_term(st.priority, m),
                            tuple(subst_term(t, m) for t in st.tuple), _lits(st.condition, m))
    if isinstance(st, (ShowDecl, ProgramDecl)):
        return st
    raise TypeError(f"unknown statement {st!r}")


def substitute(sub: Subprogram, args) -> list:
    """Replace each parameter constant by the matching ground argument."""
    args = tuple(args)
    if len(args) != len(sub.params):
        raise ArityError(f"expected {len(sub.params)} arguments, got {len(args)}")
    for a in args:
        if not a.is_ground():
            raise ValueError(f"argument {a} is not ground")
    mapping = dict(zip(sub.params, args))
    return [substitute_statement(st, mapping) for st in sub.statements]
