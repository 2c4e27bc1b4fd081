"""Evaluation of variable-free terms."""
from __future__ import annotations

from itertools import product

from ..language.terms import (
    BinaryOp, Function, Interval, Number, Pool, SymbolicConst, Term, UnaryMinus, Variable,
)


class EvalError(ValueError):
    """Arithmetic that cannot be carried out; the enclosing instance is dropped."""


def _div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _arith(op: str, a: int, b: int) -> int:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if b == 0:
        raise EvalError("division by zero")
    q = _div(a, b)
    if op == "/":
        return q
    return a - b * q  # "\\": remainder matching truncated division


def eval_term(t: Term, subst: dict | None = None) -> Term:
    """Evaluate arithmetic in a term whose variables are all bound by `subst`."""
    if isinstance(t, (Number, SymbolicConst)):
        return t
    if isinstance(t, Variable):
        if subst is None or t.name not in subst:
            raise EvalError(f"unbound variable {t.name}")
        return subst[t.name]
    if isinstance(t, Function):
        if t.is_ground():
            return t
        return Function(t.name, tuple(eval_term(a, subst) for a in t.args))
    if isinstance(t, BinaryOp):
        a = eval_term(t.lhs, subst)
        b = eval_term(t.rhs, subst)
        if not isinstance(a, Number) or not isinstance(b, Number):
            raise EvalError(f"arithmetic on non-integer in {t}")
        return Number(_arith(t.op, a.value, b.value))
    if isinstance(t, UnaryMinus):
        a = eval_term(t.arg, subst)
        if not isinstance(a, Number):
            raise EvalError(f"arithmetic on non-integer in {t}")
        return Number(-a.value)
    if isinstance(t, (Interval, Pool)):
        raise EvalError(f"{t} must be expanded before evaluation")
    raise TypeError(f"unknown term {t!r}")


def expand_term(t: Term, subst: dict | None = None) -> list:
    """All ground values of a term, unfolding intervals and pools."""
    if isinstance(t, Interval):
        out = []
        for lo in expand_term(t.lo, subst):
            for hi in expand_term(t.hi, subst):
                if not isinstance(lo, Number) or not isinstance(hi, Number):
                    raise EvalError(f"interval bounds must be integers in {t}")
                out.extend(Number(i) for i in range(lo.value, hi.value + 1))
        return out
    if isinstance(t, Pool):
        out = []
        for alt in t.alternatives:
            out.extend(expand_term(alt, subst))
        return out
    if isinstance(t, Function) and has_expansion(t):
        options = [expand_term(a, subst) for a in t.args]
        return [Function(t.name, tuple(c)) for c in product(*options)]
    if isinstance(t, BinaryOp) and has_expansion(t):
        out = []
        for a in expand_term(t.lhs, subst):
            for b in expand_term(t.rhs, subst):
                out.append(eval_term(BinaryOp(t.op, a, b)))
        return out
    if isinstance(t, UnaryMinus) and has_expansion(t):
        return [eval_term(UnaryMinus(a)) for a in expand_term(t.arg, subst)]
    return [eval_term(t, subst)]


def has_expansion(t: Term) -> bool:
    if isinstance(t, (Interval, Pool)):
        return True
    if isinstance(t, Function):
        return any(has_expansion(a) for a in t.args)
    if isinstance(t, BinaryOp):
        return has_expansion(t.lhs) or has_expansion(t.rhs)
    if isinstance(t, UnaryMinus):
        return has_expansion(t.arg)
    return False


def expand_args(args: tuple, subst: dict | None = None) -> list:
    """Cartesian expansion of an argument tuple."""
    if not any(has_expansion(a) for a in args):
        return [tuple(eval_term(a, subst) for a in args)]
    return [tuple(c) for c in product(*(expand_term(a, subst) for a in args))]


def compare(op: str, a: Term, b: Term) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    ka, kb = a.key(), b.key()
    if op == "<":
        return ka < kb
    if op == "<=":
        return ka <= kb
    if op == ">":
        return ka > kb
    if op == ">=":
        return ka >= kb
    raise ValueError(op)
