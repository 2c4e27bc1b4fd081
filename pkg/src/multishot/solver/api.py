"""Public solving interface: assignments, assumptions, results, optimization."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..grounder.ground import GroundProgramWithExternals, is_aux
from ..language.terms import sorted_atoms
from .engine import Translation

log = logging.getLogger(__name__)

SAT = "SAT"
UNSAT = "UNSAT"


@dataclass(frozen=True)
class ExternalAssignment:
    true_set: frozenset = frozenset()
    undef_set: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "true_set", frozenset(self.true_set))
        object.__setattr__(self, "undef_set", frozenset(self.undef_set))
        if self.true_set & self.undef_set:
            raise ValueError("an atom cannot be both true and undefined")

    def value(self, a) -> str:
        if a in self.true_set:
            return "t"
        return "u" if a in self.undef_set else "f"


@dataclass(frozen=True)
class Assumptions:
    must_true: frozenset = frozenset()
    must_false: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "must_true", frozenset(self.must_true))
        object.__setattr__(self, "must_false", frozenset(self.must_false))
        if self.must_true & self.must_false:
            raise ValueError("an atom cannot be assumed both true and false")


NO_ASSUMPTIONS = Assumptions()


def cost(model, elems) -> dict:
    """Per-priority sum over the distinct (weight, priority, tuple) keys that hold."""
    held = set()
    for m in elems:
        if all(a in model for a in m.pos) and not any(a in model for a in m.neg):
            held.add(m.key)
    out: dict = {}
    for w, p, _ in held:
        out[p] = out.get(p, 0) + w
    for m in elems:
        out.setdefault(m.priority, 0)
    return out


def cost_key(c: dict) -> tuple:
    """Sort key: higher priorities are compared first."""
    return tuple(c.get(p, 0) for p in sorted(c, reverse=True))


def compare_costs(a: dict, b: dict) -> int:
    for p in sorted(set(a) | set(b), reverse=True):
        x, y = a.get(p, 0), b.get(p, 0)
        if x != y:
            return -1 if x < y else 1
    return 0


@dataclass(frozen=True)
class Model:
    atoms: frozenset
    cost: dict = field(default_factory=dict, hash=False, compare=False)

    def shown(self, shows) -> list:
        return sorted_atoms(project(self.atoms, shows))


def project(atoms, shows) -> frozenset:
    """Restrict to shown signatures; no show directives means everything."""
    if not shows:
        return frozenset(atoms)
    sigs = {(s.predicate, s.arity) if hasattr(s, "predicate") else tuple(s) for s in shows}
    return frozenset(a for a in atoms if (a.predicate, len(a.args)) in sigs)


@dataclass
class SolveResult:
    status: str
    models: list = field(default_factory=list)
    exhausted: bool = True
    optimal: bool = False
    warnings: list = field(default_factory=list)

    @property
    def satisfiable(self) -> bool:
        return self.status == SAT

    def atom_sets(self) -> list:
        return [m.atoms for m in self.models]

    def shown(self, shows) -> list:
        return [m.shown(shows) for m in self.models]


def _rules_of(p):
    return p.rules if isinstance(p, GroundProgramWithExternals) else p


def _visible(model) -> frozenset:
    return frozenset(a for a in model if not is_aux(a))


def _translate(p, v, a, minimize=()):
    v = v or ExternalAssignment()
    a = a or NO_ASSUMPTIONS
    tr = Translation(_rules_of(p), v.true_set, v.undef_set, a.must_true, a.must_false, minimize)
    warnings = [f"assumption {x} is not in the atom base" for x in tr.unknown_assumptions]
    for w in warnings:
        log.warning(w)
    return tr, warnings


def enumerate_stable(p, v: ExternalAssignment | None = None, a: Assumptions | None = None,
                     limit: int = 0, minimize=(), on_model=None) -> SolveResult:
    """Stable models of P w.r.t. v that satisfy the assumptions.

    With minimize elements, only optimal models are returned (see optimize).
    """
    if minimize:
        return optimize(p, v, a, minimize, limit=limit, on_model=on_model)
    tr, warnings = _translate(p, v, a)
    e = tr.engine
    models = []
    exhausted = True
    while True:
        if e.search() is None:
            break
        m = Model(_visible(tr.model()))
        models.append(m)
        if on_model is not None:
            on_model(m)
        if limit and len(models) >= limit:
            exhausted = not e.block_current() or e.search() is None
            break
        if not e.block_current():
            break
    return SolveResult(SAT if models else UNSAT, models, exhausted, False, warnings)


def optimize(p, v: ExternalAssignment | None = None, a: Assumptions | None = None,
             minimize=(), limit: int = 0, on_model=None, on_improve=None) -> SolveResult:
    """Branch-and-bound to the optimum, then enumerate the optimal models."""
    minimize = tuple(minimize)
    tr, warnings = _translate(p, v, a, minimize)
    e = tr.engine
    best = last = None
    while e.search() is not None:
        raw = tr.model()
        c = cost(raw, minimize)
        best, last = c, raw
        if on_improve is not None:
            on_improve(Model(_visible(raw), c))
        tr.objective.bound = tr.transformed_cost(c)
        tr.objective.strict = True
    if best is None:
        return SolveResult(UNSAT, [], True, False, warnings)
    if limit == 1:
        # the last improvement is already optimal
        m = Model(_visible(last), best)
        if on_model is not None:
            on_model(m)
        return SolveResult(SAT, [m], False, True, warnings)
    # second pass: every model at the optimal cost
    tr, _ = _translate(p, v, a, minimize)
    tr.objective.bound = tr.transformed_cost(best)
    tr.objective.strict = False
    e = tr.engine
    models = []
    exhausted = True
    while e.search() is not None:
        raw = tr.model()
        m = Model(_visible(raw), cost(raw, minimize))
        models.append(m)
        if on_model is not None:
            on_model(m)
        if limit and len(models) >= limit:
            exhausted = not e.block_current() or e.search() is None
            break
        if not e.block_current():
            break
    return SolveResult(SAT, models, exhausted, True, warnings)


def consequences(rules, free=(), true_set=()):
    """Atoms fixed before any decision: (true, false), or None if inconsistent.

    `free` atoms are open choices, so the result holds for every assignment
    of them.
    """
    tr = Translation(rules, true_set, free)
    e = tr.engine
    if not e.ok or e._fixpoint() is not None:
        return None
    val = e.val
    true = frozenset(a for v, a in tr.atoms if val[2 * v] == 1)
    false = frozenset(a for v, a in tr.atoms if val[2 * v] == -1) | tr.impossible
    return true, false
