"""Statements, literals and aggregates of the input language."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .terms import Atom, Term

CMP_OPS = ("=", "!=", "<", "<=", ">", ">=")

# `not (l op r)` is stored as `l NEGATE[op] r`
NEGATE = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}
# `l op r` read right-to-left
MIRROR = {"=": "=", "!=": "!=", "<": ">", ">": "<", "<=": ">=", ">=": "<="}


@dataclass(frozen=True)
class Comparison:
    op: str
    lhs: Term
    rhs: Term

    def variables(self):
        yield from self.lhs.variables()
        yield from self.rhs.variables()

    def __str__(self):
        return f"{self.lhs}{self.op}{self.rhs}"


@dataclass(frozen=True)
class Literal:
    content: Union[Atom, Comparison]
    negated: bool = False

    @property
    def atom(self) -> Atom:
        assert isinstance(self.content, Atom)
        return self.content

    @property
    def is_comparison(self) -> bool:
        return isinstance(self.content, Comparison)

    def variables(self):
        yield from self.content.variables()

    def __str__(self):
        return f"not {self.content}" if self.negated else str(self.content)


@dataclass(frozen=True)
class AggregateElement:
    terms: tuple
    condition: tuple = ()

    def __str__(self):
        s = ",".join(str(t) for t in self.terms)
        if self.condition:
            s += " : " + ", ".join(str(c) for c in self.condition)
        return s


@dataclass(frozen=True)
class CountAggregate:
    op: str
    bound: Term
    elements: tuple

    def variables(self):
        yield from self.bound.variables()
        for e in self.elements:
            for t in e.terms:
                yield from t.variables()
            for lit in e.condition:
                yield from lit.variables()

    def __str__(self):
        elems = "; ".join(str(e) for e in self.elements)
        return f"#count {{ {elems} }} {self.op} {self.bound}"


BodyElement = Union[Literal, CountAggregate]


@dataclass(frozen=True)
class ChoiceElement:
    atom: Atom
    condition: tuple = ()

    def __str__(self):
        if not self.condition:
            return str(self.atom)
        return f"{self.atom} : " + ", ".join(str(c) for c in self.condition)


def _body_str(body) -> str:
    return ", ".join(str(b) for b in body)


@dataclass(frozen=True)
class NormalRule:
    head: Atom
    body: tuple = ()

    def __str__(self):
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {_body_str(self.body)}."


@dataclass(frozen=True)
class Constraint:
    body: tuple = ()

    def __str__(self):
        return f":- {_body_str(self.body)}."


@dataclass(frozen=True)
class ChoiceRule:
    lb: Optional[int]
    elements: tuple
    ub: Optional[int]
    body: tuple = ()

    def __str__(self):
        elems = "; ".join(str(e) for e in self.elements)
        s = "{ " + elems + " }" if elems else "{ }"
        if self.lb is not None:
            s = f"{self.lb} {s}"
        if self.ub is not None:
            s = f"{s} {self.ub}"
        if self.body:
            return f"{s} :- {_body_str(self.body)}."
        return f"{s}."


@dataclass(frozen=True)
class ExternalDecl:
    atom: Atom
    body: tuple = ()

    def __str__(self):
        if not self.body:
            return f"#external {self.atom}."
        return f"#external {self.atom} : {_body_str(self.body)}."


@dataclass(frozen=True)
class ProgramDecl:
    name: str
    params: tuple = ()

    def __str__(self):
        if not self.params:
            return f"#program {self.name}."
        return f"#program {self.name}({','.join(self.params)})."


@dataclass(frozen=True)
class ShowDecl:
    predicate: str
    arity: int

    def __str__(self):
        return f"#show {self.predicate}/{self.arity}."


@dataclass(frozen=True)
class MinimizeDecl:
    weight: Term
    priority: Term
    tuple: tuple = ()
    condition: tuple = ()

    def __str__(self):
        s = f"{self.weight}@{self.priority}"
        for t in self.tuple:
            s += f",{t}"
        if self.condition:
            s += " : " + ", ".join(str(c) for c in self.condition)
        return f"#minimize {{ {s} }}."


Statement = Union[NormalRule, Constraint, ChoiceRule, ExternalDecl, ProgramDecl, ShowDecl, MinimizeDecl]


class ParsedProgram(list):
    """Statement list that also remembers `#include <incmode>.` and `#const` definitions."""

    def __init__(self, stmts=(), incmode: bool = False, constants=None):
        super().__init__(stmts)
        self.incmode = incmode
        self.constants = dict(constants or {})
