"""Textbook stable-model machinery, used as an independent oracle."""
from __future__ import annotations

from itertools import combinations

from ..language.terms import Atom, Function, SymbolicConst
from ..grounder.ground import GroundRule, make_rule

BRUTE_FORCE_LIMIT = 24


class TooLarge(ValueError):
    pass


def _shadow(a: Atom) -> Atom:
    inner = Function(a.predicate, a.args) if a.args else SymbolicConst(a.predicate)
    return Atom("__choice", (inner,))


def desugar_choices(rules):
    """Replace {a} <- B by a <- B, not a' and a' <- B, not a."""
    out, fresh = [], {}
    for r in rules:
        if r.choice:
            a2 = _shadow(r.head)
            fresh[a2] = r.head
            out.append(make_rule(r.head, r.pos, r.neg + (a2,)))
            out.append(make_rule(a2, r.pos, r.neg + (r.head,)))
        else:
            out.append(r)
    return out, fresh


def reduct(rules, X) -> list:
    """Gelfond-Lifschitz reduct of normal rules and constraints w.r.t. X."""
    X = set(X)
    return [GroundRule(r.head, r.pos) for r in rules if not any(a in X for a in r.neg)]


def minimal_model(rules) -> set:
    """Least model of a negation-free program (constraints are ignored)."""
    missing = {}
    watch: dict = {}
    model: set = set()
    queue = []
    for i, r in enumerate(rules):
        if r.head is None:
            continue
        need = set(r.pos)
        missing[i] = len(need)
        for a in need:
            watch.setdefault(a, []).append(i)
        if not need:
            queue.append(r.head)
    while queue:
        a = queue.pop()
        if a in model:
            continue
        model.add(a)
        for i in watch.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0:
                queue.append(rules[i].head)
    return model


def _violates_constraint(rules, X) -> bool:
    for r in rules:
        if r.head is None and all(a in X for a in r.pos) and not any(a in X for a in r.neg):
            return True
    return False


def is_stable(rules, X) -> bool:
    """X = least model of the reduct, and no constraint fires."""
    X = set(X)
    reduced = []
    for r in rules:
        if r.head is None:
            continue
        if any(a in X for a in r.neg):
            continue
        if r.choice and r.head not in X:
            continue
        reduced.append(GroundRule(r.head, r.pos))
    return minimal_model(reduced) == X and not _violates_constraint(rules, X)


def with_assignment(rules, true_set=(), undef_set=()) -> list:
    """P + {a <- | a in Vt} + {{a} <- | a in Vu}."""
    out = list(rules)
    out += [make_rule(a) for a in sorted(true_set, key=Atom.key)]
    out += [make_rule(a, is_choice=True) for a in sorted(undef_set, key=Atom.key)]
    return out


def brute_force_stable(rules, v=None) -> set:
    """All stable models by exhaustive guessing over the atom base.

    Every stable model X equals the least model of the reduct P^X, and that
    reduct depends only on X restricted to the atoms that occur negatively
    or as choice heads.  Guessing that restriction and checking consistency
    therefore covers all subsets of the base.
    """
    if v is not None:
        rules = with_assignment(rules, v.true_set, v.undef_set)
    rules = list(rules)
    base = set()
    for r in rules:
        base.update(r.atoms())
    if len(base) > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"atom base has {len(base)} atoms (limit {BRUTE_FORCE_LIMIT})")
    guess = sorted({a for r in rules for a in r.neg} | {r.head for r in rules if r.choice}, key=Atom.key)
    models = set()
    for k in range(len(guess) + 1):
        for S in combinations(guess, k):
            S = set(S)
            reduced = []
            for r in rules:
                if r.head is None or any(a in S for a in r.neg):
                    continue
                if r.choice and r.head not in S:
                    continue
                reduced.append(GroundRule(r.head, r.pos))
            M = minimal_model(reduced)
            if {a for a in guess if a in M} != S:
                continue
            if _violates_constraint(rules, M):
                continue
            assert is_stable(rules, M)
            models.add(frozenset(M))
    return models
