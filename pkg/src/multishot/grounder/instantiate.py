"""Contextual instantiation of non-ground statements relative to an atom base.

Works in two phases.  A semi-naive fixpoint over the strongly connected
components of the predicate dependency graph computes every derivable head
(aggregates are optimistically taken as satisfiable).  Then all rule
instances are emitted, aggregates and choice bounds are compiled into
auxiliary atoms, instances whose positive body left the domain are pruned,
and negative literals over atoms outside the final domain are erased.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product

from ..language.ast import (
    ChoiceRule, Comparison, Constraint, CountAggregate, ExternalDecl, Literal, MinimizeDecl,
    NormalRule, ProgramDecl, ShowDecl,
)
from ..language.parser import check_safety
from ..language.terms import Atom, Function, Interval, Number, Pool, Term
from .aggregates import AuxFactory, at_least_literals, counter_rules
from .arith import EvalError, eval_term, expand_args, expand_term, has_expansion
from .depgraph import tarjan
from .ground import (
    AUX_PREDICATE, AtomBase, GroundingResult, GroundProgramWithExternals, GroundRule,
    MinimizeGroundElement, make_rule,
)
from .matching import Domain, Executor, compile_plan

log = logging.getLogger(__name__)

DEFAULT_INSTANCE_CAP = 10 ** 6


class GroundingError(Exception):
    pass


# static expansion of pools and intervals inside literals

def _pool_alternatives(t: Term) -> list:
    if isinstance(t, Pool):
        out = []
        for a in t.alternatives:
            out.extend(_pool_alternatives(a))
        return out
    if isinstance(t, Function) and any(_contains(a, Pool) for a in t.args):
        return [Function(t.name, c) for c in product(*(_pool_alternatives(a) for a in t.args))]
    return [t]


def _contains(t: Term, cls) -> bool:
    if isinstance(t, cls):
        return True
    if isinstance(t, Function):
        return any(_contains(a, cls) for a in t.args)
    if isinstance(t, Pool):
        return any(_contains(a, cls) for a in t.alternatives)
    if isinstance(t, Interval):
        return True if cls is Interval else _contains(t.lo, cls) or _contains(t.hi, cls)
    for attr in ("lhs", "rhs", "arg"):
        sub = getattr(t, attr, None)
        if sub is not None and _contains(sub, cls):
            return True
    return False


def _expand_literal(lit: Literal) -> list:
    """Alternatives (disjunction) of conjunctions of literals."""
    c = lit.content
    if isinstance(c, Comparison):
        if _contains(c.lhs, Pool) or _contains(c.rhs, Pool) or _contains(c.lhs, Interval) or _contains(c.rhs, Interval):
            raise GroundingError(f"pools and intervals are not supported inside comparisons: {c}")
        return [[lit]]
    alternatives = []
    arg_options = [_pool_alternatives(t) for t in c.args]
    for args in product(*arg_options):
        if any(_contains(t, Interval) for t in args):
            if any(set(t.variables()) for t in args if _contains(t, Interval)):
                raise GroundingError(f"intervals with variable bounds are not supported in bodies: {c}")
            conj = []
            for combo in product(*([expand_term(t)] if _contains(t, Interval) else [t] for t in args)):
                conj.append(Literal(Atom(c.predicate, combo), lit.negated))
            alternatives.append(conj)
        else:
            alternatives.append([Literal(Atom(c.predicate, tuple(args)), lit.negated)])
    return alternatives


def expand_literals(lits) -> list:
    """All alternative literal lists obtained by unfolding pools and intervals."""
    options = []
    for lit in lits:
        if isinstance(lit, CountAggregate):
            options.append([[lit]])
        else:
            options.append(_expand_literal(lit))
    out = []
    for combo in product(*options):
        flat = []
        for conj in combo:
            flat.extend(conj)
        out.append(tuple(flat))
    return out


# statement preparation

@dataclass
class _Body:
    pos: list
    neg: list
    cmps: list
    aggs: list

    @property
    def variables(self) -> set:
        vs = set()
        for a in self.pos:
            vs.update(a.variables())
        return vs


def _split(lits) -> _Body:
    b = _Body([], [], [], [])
    for lit in lits:
        if isinstance(lit, CountAggregate):
            b.aggs.append(lit)
        elif lit.is_comparison:
            b.cmps.append(lit.content)
        elif lit.negated:
            b.neg.append(lit.atom)
        else:
            b.pos.append(lit.atom)
    return b


@dataclass
class _Unit:
    """A head-producing rule (or choice element, or external) for the fixpoint."""

    uid: int
    kind: str            # "rule" | "elem" | "ext"
    head: Atom
    body: _Body
    stmt: object
    body_vars: tuple = ()  # variables of the enclosing rule body (choice elements)
    plans: dict = field(default_factory=dict)
    seen: set = field(default_factory=set)
    instances: list = field(default_factory=list)
    varnames: tuple = ()


def _sig(a: Atom) -> tuple:
    return (a.predicate, len(a.args))


class _Grounder:
    def __init__(self, C: AtomBase, instance_cap: int, aux_start=None):
        self.C = C
        self.cap = instance_cap
        self.count = 0
        self.warnings: list = []
        self._warned: set = set()
        self.domain = Domain(sorted(C.atoms, key=Atom.key))
        self.certain = set(C.facts)
        self.exec = Executor(self.domain, self.certain, self.warn)
        self.aux = AuxFactory(aux_start if aux_start is not None else next_aux_id(C.atoms))

    def warn(self, msg: str):
        if msg not in self._warned:
            self._warned.add(msg)
            self.warnings.append(msg)
            log.warning(msg)

    def bump(self, n: int = 1):
        self.count += n
        if self.count > self.cap:
            raise GroundingError(f"instance cap of {self.cap} exceeded; instantiation may not terminate")


def next_aux_id(atoms) -> int:
    best = 0
    for a in atoms:
        if a.predicate == AUX_PREDICATE and a.args and isinstance(a.args[0], Number):
            best = max(best, a.args[0].value)
    return best + 1


def instantiate(stmts, C: AtomBase | None = None, instance_cap: int = DEFAULT_INSTANCE_CAP,
                aux_start: int | None = None) -> GroundingResult:
    """Ground `stmts` relative to atom base `C`.

    Returns the ground rules P, the externals E and the new base
    D = C + heads(P) + E, together with ground minimize elements and the
    show declarations found among the statements.
    """
    C = C or AtomBase()
    g = _Grounder(C, instance_cap, aux_start)

    rules, externals, minimize, shows, constraints, choices = [], [], [], [], [], []
    for st in stmts:
        if isinstance(st, ProgramDecl):
            continue
        if isinstance(st, ShowDecl):
            if st not in shows:
                shows.append(st)
            continue
        check_safety(st)
        if isinstance(st, NormalRule):
            for body in expand_literals(st.body):
                rules.append((st.head, _split(body), st))
        elif isinstance(st, Constraint):
            for body in expand_literals(st.body):
                constraints.append((_split(body), st))
        elif isinstance(st, ChoiceRule):
            for body in expand_literals(st.body):
                elems = []
                for e in st.elements:
                    for cond in expand_literals(e.condition):
                        elems.append((e.atom, _split(cond)))
                choices.append((st, _split(body), elems))
        elif isinstance(st, ExternalDecl):
            for body in expand_literals(st.body):
                externals.append((st.atom, _split(body), st))
        elif isinstance(st, MinimizeDecl):
            for cond in expand_literals(st.condition):
                minimize.append((st, _split(cond)))
        else:
            raise TypeError(f"unknown statement {st!r}")

    units = []
    for head, body, st in rules:
        units.append(_Unit(len(units), "rule", head, body, st))
    choice_units = []
    for ci, (st, body, elems) in enumerate(choices):
        bvars = tuple(sorted(body.variables))
        for head, cond in elems:
            merged = _Body(body.pos + cond.pos, body.neg + cond.neg, body.cmps + cond.cmps, list(body.aggs))
            u = _Unit(len(units), "elem", head, merged, (ci, st), body_vars=bvars)
            units.append(u)
            choice_units.append(u)
    for head, body, st in externals:
        units.append(_Unit(len(units), "ext", head, body, st))
    for u in units:
        u.varnames = tuple(sorted(u.body.variables))

    _fixpoint(g, units)

    # phase 2: emit ground rules
    out_rules: list = []
    ext_rules: list = []
    for u in units:
        if u.kind == "rule":
            if u.body.aggs:
                for subst, pos, neg in u.instances:
                    _emit_with_aggregates(g, u.head, u.body.aggs, dict(subst), pos, neg, out_rules)
            else:
                for heads, pos, neg in u.instances:
                    for h in heads:
                        out_rules.append(make_rule(h, pos, neg))
        elif u.kind == "ext":
            for heads, pos, neg in u.instances:
                for h in heads:
                    ext_rules.append(make_rule(h, pos, neg))
    units_of: dict = {}
    for u in choice_units:
        units_of.setdefault(u.stmt[0], []).append(u)
    for ci, (st, body, elems) in enumerate(choices):
        _emit_choice(g, ci, st, body, units_of.get(ci, []), out_rules)
    for body, st in constraints:
        _emit_constraint(g, body, out_rules)
    min_raw = []
    for st, cond in minimize:
        _emit_minimize(g, st, cond, min_raw)

    # prune instances whose positive body is outside the domain (greatest fixpoint)
    out_rules, ext_rules = _prune(C, out_rules, ext_rules)
    heads_p = {r.head for r in out_rules if r.head is not None}
    E = frozenset(r.head for r in ext_rules)
    D = set(C.atoms) | heads_p | E
    final_rules = []
    seen = set()
    for r in out_rules:
        if r.neg and any(a not in D for a in r.neg):
            r = GroundRule(r.head, r.pos, tuple(a for a in r.neg if a in D), r.choice)
        if r not in seen:
            seen.add(r)
            final_rules.append(r)
    for r in ext_rules:
        if r.neg or any(a not in g.certain for a in r.pos):
            g.warn(f"#external {r.head} depends on a non-domain condition")
    mins = []
    mseen = set()
    for m in min_raw:
        if all(a in D for a in m.pos):
            m = MinimizeGroundElement(m.weight, m.priority, m.tuple, m.pos, tuple(a for a in m.neg if a in D))
            if m not in mseen:
                mseen.add(m)
                mins.append(m)
    facts = frozenset(a for a in g.certain if a in D)
    prog = GroundProgramWithExternals(tuple(final_rules), E, AtomBase(frozenset(D), facts))
    return GroundingResult(prog, tuple(mins), tuple(shows), tuple(g.warnings))


# phase 1

def _fixpoint(g: _Grounder, units) -> None:
    # predicate-level dependency graph
    head_units: dict = {}
    graph: dict = {}
    for u in units:
        hs = _sig(u.head)
        head_units.setdefault(hs, []).append(u)
        deps = graph.setdefault(hs, set())
        for a in u.body.pos + u.body.neg:
            deps.add(_sig(a))
        for agg in u.body.aggs:
            for e in agg.elements:
                for lit in e.condition:
                    if not lit.is_comparison:
                        deps.add(_sig(lit.atom))
        for d in deps:
            graph.setdefault(d, set())
    for comp in tarjan(graph):
        comp_set = set(comp)
        cunits = [u for s in sorted(comp) for u in head_units.get(s, ())]
        if not cunits:
            continue
        cunits.sort(key=lambda u: u.uid)
        new: list = []
        for u in cunits:
            _eval_unit(g, u, None, new)
        recursive = [u for u in cunits if any(_sig(a) in comp_set for a in u.body.pos)]
        while True:
            delta = _commit(g, new)
            if not delta or not recursive:
                break
            g.exec.delta = delta
            new = []
            for u in recursive:
                for i, a in enumerate(u.body.pos):
                    if _sig(a) in comp_set and delta.atoms(_sig(a)):
                        _eval_unit(g, u, i, new)
            g.exec.delta = None


def _commit(g: _Grounder, new: list) -> Domain | None:
    delta = Domain()
    for a in new:
        if a not in g.domain.members:
            delta.add(a)
    for a in delta.by_sig.values():
        for x in a:
            g.domain.add(x)
    return delta if delta.members else None


def _eval_unit(g: _Grounder, u: _Unit, delta_pos, new: list) -> None:
    plan = u.plans.get(delta_pos)
    if plan is None:
        try:
            plan = compile_plan(u.body.pos, u.body.cmps, u.body.neg,
                                first=delta_pos, first_source="delta" if delta_pos is not None else "all")
        except EvalError as e:
            raise GroundingError(f"cannot ground {u.stmt if not isinstance(u.stmt, tuple) else u.stmt[1]}: {e}")
        u.plans[delta_pos] = plan
    names = u.varnames
    certain = g.certain
    is_rule = u.kind == "rule"
    has_aggs = bool(u.body.aggs)
    head = u.head
    head_ground = head.is_ground() and not any(has_expansion(t) for t in head.args)
    head_simple = not any(has_expansion(t) for t in head.args)

    def emit(subst, pos_out, neg_out):
        key = tuple(subst[n] for n in names)
        if key in u.seen:
            return
        u.seen.add(key)
        try:
            if head_ground:
                heads = (head,)
            elif head_simple:
                heads = (Atom(head.predicate, tuple(eval_term(t, subst) for t in head.args)),)
            else:
                heads = tuple(Atom(head.predicate, args) for args in expand_args(head.args, subst))
        except EvalError as e:
            g.warn(f"instance of {head} dropped: {e}")
            return
        g.bump(len(heads))
        pos = tuple(pos_out)
        neg = tuple(neg_out)
        if u.kind == "elem":
            bkey = tuple(subst[n] for n in u.body_vars)
            u.instances.append((bkey, heads, pos, neg))
        elif has_aggs:
            u.instances.append((tuple(subst.items()), pos, neg))
        else:
            u.instances.append((heads, pos, neg))
        if is_rule and not neg and not has_aggs and all(a in certain for a in pos):
            for h in heads:
                certain.add(h)
        new.extend(heads)

    g.exec.run(plan, {}, emit)


# phase 2 helpers

def _enumerate(g: _Grounder, body: _Body, bound: dict, emit) -> None:
    try:
        plan = compile_plan(body.pos, body.cmps, body.neg, bound=set(bound))
    except EvalError as e:
        raise GroundingError(f"cannot ground body: {e}")
    g.exec.run(plan, dict(bound), emit)


def _ground_aggregate(g: _Grounder, agg: CountAggregate, subst: dict):
    """Ground elements of a count aggregate under the global substitution."""
    try:
        bound = eval_term(agg.bound, subst)
    except EvalError as e:
        g.warn(f"aggregate bound {agg.bound} dropped: {e}")
        return None
    if not isinstance(bound, Number):
        g.warn(f"aggregate bound {bound} is not an integer")
        return None
    elems: dict = {}
    for e in agg.elements:
        for cond in expand_literals(e.condition):
            body = _split(cond)

            def emit(s, pos_out, neg_out, terms=e.terms):
                try:
                    tuples = expand_args(terms, s)
                except EvalError as err:
                    g.warn(f"aggregate element dropped: {err}")
                    return
                for t in tuples:
                    elems.setdefault(t, []).append((tuple(pos_out), tuple(neg_out)))
            _enumerate(g, body, subst, emit)
    return bound.value, elems


def _emit_with_aggregates(g, head, aggs, subst, pos, neg, out_rules, is_constraint=False):
    extra_alts = [((), ())]
    aux_rules = []
    for agg in aggs:
        r = _ground_aggregate(g, agg, subst)
        if r is None:
            return
        bound, elems = r
        conds = [elems[k] for k in sorted(elems, key=lambda t: tuple(x.key() for x in t))]
        alts = at_least_literals(agg.op, bound, len(conds))
        if alts is None:
            return
        need = max((k for alt in alts for k, _ in alt), default=0)
        lits = {}
        if need > 0:
            e_atoms = []
            for cl in conds:
                ea = g.aux.fresh()
                for cp, cn in cl:
                    aux_rules.append(make_rule(ea, cp, cn))
                e_atoms.append(ea)
            cnt, rules = counter_rules(e_atoms, need, g.aux)
            aux_rules.extend(rules)
            lits = cnt
        new_alts = []
        for xp, xn in extra_alts:
            for alt in alts:
                p2, n2 = list(xp), list(xn)
                for k, positive in alt:
                    (p2 if positive else n2).append(lits[k])
                new_alts.append((tuple(p2), tuple(n2)))
        extra_alts = new_alts
    try:
        heads = [None] if is_constraint else [Atom(head.predicate, a) for a in expand_args(head.args, subst)]
    except EvalError as e:
        g.warn(f"instance of {head} dropped: {e}")
        return
    g.bump(len(aux_rules) + len(extra_alts) * len(heads))
    out_rules.extend(aux_rules)
    for xp, xn in extra_alts:
        for h in heads:
            out_rules.append(make_rule(h, pos + xp, neg + xn))


def _emit_constraint(g, body: _Body, out_rules):
    collected = []

    def emit(subst, pos_out, neg_out):
        collected.append((dict(subst), tuple(pos_out), tuple(neg_out)))
    _enumerate(g, body, {}, emit)
    for subst, pos, neg in collected:
        if body.aggs:
            _emit_with_aggregates(g, None, body.aggs, subst, pos, neg, out_rules, is_constraint=True)
        else:
            g.bump()
            out_rules.append(make_rule(None, pos, neg))


def _emit_choice(g, ci, st: ChoiceRule, body: _Body, units, out_rules):
    by_body: dict = {}
    for u in units:
        for bkey, heads, pos, neg in u.instances:
            lst = by_body.setdefault(bkey, [])
            for h in heads:
                lst.append((h, pos, neg))
    if st.lb is None and st.ub is None and not body.aggs:
        for lst in by_body.values():
            for h, pos, neg in lst:
                out_rules.append(make_rule(h, pos, neg, is_choice=True))
        return
    # bounds (and body aggregates) need the body instances themselves
    bvars = tuple(sorted(body.variables))
    collected = []

    def emit(subst, pos_out, neg_out):
        collected.append((dict(subst), tuple(pos_out), tuple(neg_out)))
    _enumerate(g, body, {}, emit)
    for subst, bpos, bneg in collected:
        bkey = tuple(subst[n] for n in bvars)
        elems = by_body.get(bkey, [])
        extra_alts = [((), ())]
        aux_rules = []
        if body.aggs:
            tmp = []
            _emit_with_aggregates(g, None, body.aggs, subst, (), (), tmp, is_constraint=True)
            # reuse the aggregate literals computed for a headless instance
            extra_alts = [(r.pos, r.neg) for r in tmp if r.head is None]
            aux_rules = [r for r in tmp if r.head is not None]
            out_rules.extend(aux_rules)
        for xp, xn in extra_alts:
            pos, neg = bpos + xp, bneg + xn
            for h, epos, eneg in elems:
                # element instances already include the body part
                out_rules.append(make_rule(h, epos + xp, eneg + xn, is_choice=True))
            _choice_bounds(g, st, pos, neg, elems, out_rules)


def _choice_bounds(g, st: ChoiceRule, pos, neg, elems, out_rules):
    if st.lb is None and st.ub is None:
        return
    by_head: dict = {}
    for h, epos, eneg in elems:
        by_head.setdefault(h, []).append((epos, eneg))
    heads = sorted(by_head, key=Atom.key)
    n = len(heads)
    need = []
    if st.lb is not None and st.lb > 0:
        if st.lb > n:
            out_rules.append(make_rule(None, pos, neg))
            return
        need.append(st.lb)
    if st.ub is not None and st.ub + 1 <= n:
        need.append(st.ub + 1)
    if not need:
        return
    e_atoms = []
    for h in heads:
        ea = g.aux.fresh()
        for epos, eneg in by_head[h]:
            out_rules.append(make_rule(ea, (h,) + epos, eneg))
        e_atoms.append(ea)
    cnt, rules = counter_rules(e_atoms, max(need), g.aux)
    out_rules.extend(rules)
    g.bump(len(rules) + len(e_atoms))
    if st.lb is not None and st.lb > 0:
        out_rules.append(make_rule(None, pos, neg + (cnt[st.lb],)))
    if st.ub is not None and st.ub + 1 <= n:
        out_rules.append(make_rule(None, pos + (cnt[st.ub + 1],), neg))


def _emit_minimize(g, st: MinimizeDecl, cond: _Body, out):
    collected = []

    def emit(subst, pos_out, neg_out):
        collected.append((dict(subst), tuple(pos_out), tuple(neg_out)))
    _enumerate(g, cond, {}, emit)
    for subst, pos, neg in collected:
        try:
            w = eval_term(st.weight, subst)
            p = eval_term(st.priority, subst)
            tuples = expand_args(st.tuple, subst)
        except EvalError as e:
            g.warn(f"minimize element dropped: {e}")
            continue
        if not isinstance(w, Number) or not isinstance(p, Number):
            g.warn(f"minimize weight/priority must be integers: {w}@{p}")
            continue
        for t in tuples:
            out.append(MinimizeGroundElement(w.value, p.value, t, pos, neg))


def _prune(C: AtomBase, rules, ext_rules):
    """Drop instances whose positive body can no longer be derived."""
    allr = list(rules) + list(ext_rules)
    nrules = len(rules)
    support: dict = {}
    for r in allr:
        if r.head is not None:
            support[r.head] = support.get(r.head, 0) + 1
    present = lambda a: a in C.atoms or support.get(a, 0) > 0  # noqa: E731
    watch: dict = {}
    alive = [True] * len(allr)
    queue = []
    for i, r in enumerate(allr):
        for a in r.pos:
            watch.setdefault(a, []).append(i)
        if any(not present(a) for a in r.pos):
            alive[i] = False
            queue.append(i)
    while queue:
        i = queue.pop()
        h = allr[i].head
        if h is None:
            continue
        support[h] -= 1
        if support[h] == 0 and h not in C.atoms:
            for j in watch.get(h, ()):
                if alive[j]:
                    alive[j] = False
                    queue.append(j)
    kept = [r for i, r in enumerate(allr[:nrules]) if alive[i]]
    kept_ext = [r for i, r in enumerate(allr[nrules:], nrules) if alive[i]]
    return kept, kept_ext
