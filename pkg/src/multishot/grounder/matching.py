"""Compiled join plans: match positive literals against an atom domain."""
from __future__ import annotations

from collections import defaultdict

from ..language.terms import Atom, BinaryOp, Function, Interval, Number, Pool, SymbolicConst, UnaryMinus, Variable
from .arith import EvalError, compare, eval_term


class Domain:
    """Ground atoms grouped by signature, with lazily built argument indexes."""

    def __init__(self, atoms=()):
        self.members: set = set()
        self.by_sig: dict = defaultdict(list)
        self._indexes: dict = {}
        for a in atoms:
            self.add(a)

    def add(self, a: Atom) -> bool:
        if a in self.members:
            return False
        self.members.add(a)
        sig = (a.predicate, len(a.args))
        self.by_sig[sig].append(a)
        idx = self._indexes.get(sig)
        if idx:
            for pos, table in idx.items():
                table.setdefault(a.args[pos], []).append(a)
        return True

    def __contains__(self, a) -> bool:
        return a in self.members

    def __len__(self) -> int:
        return len(self.members)

    def atoms(self, sig) -> list:
        return self.by_sig.get(sig, ())

    def lookup(self, sig, pos: int, value) -> list:
        idx = self._indexes.setdefault(sig, {})
        table = idx.get(pos)
        if table is None:
            table = {}
            for a in self.by_sig.get(sig, ()):
                table.setdefault(a.args[pos], []).append(a)
            idx[pos] = table
        return table.get(value, ())


# argument kinds inside a compiled match step
FIXED, EVAL, BIND, CHECK, PATTERN, LATE = range(6)


def _is_arith(t) -> bool:
    return isinstance(t, (BinaryOp, UnaryMinus, Interval, Pool))


def _binders(t, acc: set):
    if isinstance(t, Variable):
        acc.add(t.name)
    elif isinstance(t, Function):
        for a in t.args:
            _binders(a, acc)


def _arith_vars(t, acc: set, inside: bool = False):
    if isinstance(t, Variable):
        if inside:
            acc.add(t.name)
    elif isinstance(t, Function):
        for a in t.args:
            _arith_vars(a, acc, inside)
    elif isinstance(t, (BinaryOp, UnaryMinus, Interval, Pool)):
        for v in t.variables():
            acc.add(v)


def literal_binders(a: Atom) -> set:
    acc: set = set()
    for t in a.args:
        _binders(t, acc)
    return acc


def literal_arith_vars(a: Atom) -> set:
    acc: set = set()
    for t in a.args:
        _arith_vars(t, acc)
    return acc


class MatchStep:
    __slots__ = ("lit", "sig", "args", "probe", "full", "source")

    def __init__(self, lit: int, atom: Atom, bound: set, source: str):
        self.lit = lit
        self.sig = (atom.predicate, len(atom.args))
        self.source = source
        args = []
        seen = set(bound)
        late = []
        for pos, t in enumerate(atom.args):
            vs = set(t.variables())
            if not vs and not _is_arith(t) and (not isinstance(t, Function) or t.is_ground()):
                args.append((pos, FIXED, t))
            elif vs <= bound:
                args.append((pos, EVAL, t))
            elif isinstance(t, Variable):
                if t.name in seen:
                    args.append((pos, CHECK, t.name))
                else:
                    args.append((pos, BIND, t.name))
                    seen.add(t.name)
            elif isinstance(t, Function) and not _has_arith(t):
                args.append((pos, PATTERN, t))
                for v in vs:
                    seen.add(v)
            else:
                late.append((pos, LATE, t))
        # arithmetic depending on variables bound by this very literal
        self.args = tuple(args + late)
        self.probe = next(((p, t) for p, k, t in args if k in (FIXED, EVAL)), None)
        self.full = all(k in (FIXED, EVAL) for _, k, _ in self.args)


def _has_arith(t) -> bool:
    if _is_arith(t):
        return True
    if isinstance(t, Function):
        return any(_has_arith(a) for a in t.args)
    return False


def _unify(pat, val, subst: dict, newly: list) -> bool:
    if isinstance(pat, Variable):
        cur = subst.get(pat.name)
        if cur is None:
            subst[pat.name] = val
            newly.append(pat.name)
            return True
        return cur == val
    if isinstance(pat, Function):
        if not isinstance(val, Function) or val.name != pat.name or len(val.args) != len(pat.args):
            return False
        for p, v in zip(pat.args, val.args):
            if not _unify(p, v, subst, newly):
                return False
        return True
    if isinstance(pat, (Number, SymbolicConst)):
        return pat == val
    return eval_term(pat, subst) == val


class Plan:
    """An ordered sequence of match / comparison / negation steps."""

    __slots__ = ("steps", "npos", "nneg")

    def __init__(self, steps, npos, nneg):
        self.steps = steps
        self.npos = npos
        self.nneg = nneg


def compile_plan(pos, cmps, neg, bound=frozenset(), first: int | None = None, first_source="all") -> Plan:
    """Order the literals greedily by how many arguments are already known."""
    bound = set(bound)
    steps = []
    remaining = list(range(len(pos)))
    pending_cmp = list(range(len(cmps)))
    pending_neg = list(range(len(neg)))

    def flush():
        for i in list(pending_cmp):
            c = cmps[i]
            if set(c.variables()) <= bound:
                steps.append(("cmp", c))
                pending_cmp.remove(i)
        for i in list(pending_neg):
            if set(neg[i].variables()) <= bound:
                steps.append(("neg", i, neg[i]))
                pending_neg.remove(i)

    flush()
    # the delta literal goes first unless its arithmetic needs other bindings
    if first is not None and literal_arith_vars(pos[first]) <= bound | literal_binders(pos[first]):
        steps.append(("match", MatchStep(first, pos[first], bound, first_source)))
        bound |= literal_binders(pos[first])
        remaining.remove(first)
        flush()
    while remaining:
        best, best_score = None, None
        for i in remaining:
            a = pos[i]
            binders = literal_binders(a)
            if not literal_arith_vars(a) <= bound | binders:
                continue
            known = sum(1 for t in a.args if set(t.variables()) <= bound)
            unknown_vars = len(binders - bound)
            score = (unknown_vars == 0, known, -unknown_vars, -i)
            if best_score is None or score > best_score:
                best, best_score = i, score
        if best is None:
            raise EvalError("no safe evaluation order for rule body")
        steps.append(("match", MatchStep(best, pos[best], bound, first_source if best == first else "all")))
        bound |= literal_binders(pos[best])
        remaining.remove(best)
        flush()
    if pending_cmp or pending_neg:
        raise EvalError("unsafe literal in rule body")
    return Plan(tuple(steps), len(pos), len(neg))


class Executor:
    """Runs plans against a domain (and an optional delta domain)."""

    def __init__(self, domain: Domain, certain: set, warn):
        self.domain = domain
        self.delta: Domain | None = None
        self.certain = certain
        self.warn = warn

    def run(self, plan: Plan, subst: dict, emit) -> None:
        pos_out = [None] * plan.npos
        neg_out = [None] * plan.nneg
        self._step(plan.steps, 0, subst, pos_out, neg_out, emit)

    def _step(self, steps, k, subst, pos_out, neg_out, emit):
        if k == len(steps):
            emit(subst, pos_out, neg_out)
            return
        step = steps[k]
        tag = step[0]
        if tag == "match":
            self._match(step[1], steps, k, subst, pos_out, neg_out, emit)
        elif tag == "cmp":
            c = step[1]
            try:
                ok = compare(c.op, eval_term(c.lhs, subst), eval_term(c.rhs, subst))
            except EvalError as e:
                self.warn(f"comparison {c} dropped: {e}")
                return
            if ok:
                self._step(steps, k + 1, subst, pos_out, neg_out, emit)
        else:
            _, i, a = step
            try:
                g = Atom(a.predicate, tuple(eval_term(t, subst) for t in a.args))
            except EvalError as e:
                self.warn(f"instance dropped: {e}")
                return
            if g in self.certain:
                return
            neg_out[i] = g
            self._step(steps, k + 1, subst, pos_out, neg_out, emit)

    def _match(self, ms: MatchStep, steps, k, subst, pos_out, neg_out, emit):
        dom = self.delta if ms.source == "delta" else self.domain
        pred, arity = ms.sig
        try:
            if ms.full:
                g = Atom(pred, tuple(t if kind == FIXED else eval_term(t, subst) for _, kind, t in ms.args))
                if g in dom.members:
                    pos_out[ms.lit] = g
                    self._step(steps, k + 1, subst, pos_out, neg_out, emit)
                return
            known = []
            for p, kind, t in ms.args:
                if kind == FIXED:
                    known.append((p, t))
                elif kind == EVAL:
                    known.append((p, eval_term(t, subst)))
        except EvalError as e:
            self.warn(f"instance dropped: {e}")
            return
        if known:
            p0, v0 = known[0]
            candidates = dom.lookup(ms.sig, p0, v0)
            rest = known[1:]
        else:
            candidates = dom.atoms(ms.sig)
            rest = ()
        for g in candidates:
            args = g.args
            ok = True
            for p, v in rest:
                if args[p] != v:
                    ok = False
                    break
            if not ok:
                continue
            newly = []
            for p, kind, t in ms.args:
                if kind == BIND:
                    subst[t] = args[p]
                    newly.append(t)
                elif kind == CHECK:
                    if subst[t] != args[p]:
                        ok = False
                        break
                elif kind == PATTERN:
                    if not _unify(t, args[p], subst, newly):
                        ok = False
                        break
                elif kind == LATE:
                    try:
                        if not _unify(t, args[p], subst, newly):
                            ok = False
                            break
                    except EvalError:
                        ok = False
                        break
            if ok:
                pos_out[ms.lit] = g
                self._step(steps, k + 1, subst, pos_out, neg_out, emit)
            for v in newly:
                del subst[v]


def ground_atom(a: Atom, subst: dict) -> Atom:
    return Atom(a.predicate, tuple(eval_term(t, subst) for t in a.args))
