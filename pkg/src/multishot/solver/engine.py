"""Conflict-driven search over the completion of a ground program.

Literals are ints: 2*v is the positive literal of variable v, 2*v+1 its
negation.  Variable 1 is the constant TRUE.  Stability is enforced by an
unfounded-set check over the non-trivial positive strongly connected
components, which adds loop clauses on demand.
"""
from __future__ import annotations

import heapq

from ..grounder.depgraph import tarjan

TRUE_LIT = 2


def neg(lit: int) -> int:
    return lit ^ 1


class _Bound:
    """Branch-and-bound state for a lexicographic objective."""

    def __init__(self, levels):
        # levels: list of (priority, [(lit, weight)]) by decreasing priority
        self.levels = levels
        self.bound = None      # transformed cost vector, or None
        self.strict = True


class Engine:
    def __init__(self):
        self.nv = 1
        self.val = [0, 0, 0, 0]
        self.level = [0, 0]
        self.reason = [None, None]
        self.activity = [0.0, 0.0]
        self.phase = [True, True]
        self.decidable = [False, False]
        self.watches = [[], [], [], []]
        self.bins = [[], [], [], []]
        self.trail = []
        self.lim = []
        self.qhead = 0
        self.inc = 1.0
        self.heap = []
        self.hkey = [None, None]    # key of each variable's live heap entry
        self.ok = True
        self.sccs = []          # per component: (atoms, bodies, occurs)
        self.ufs_watch = {}     # literal -> components affected when it turns false
        self.dirty = set()
        self.objective = None
        self.conflicts = 0
        self._assign(TRUE_LIT, None)

    # construction -------------------------------------------------------
    def new_var(self, decidable: bool = False) -> int:
        self.nv += 1
        v = self.nv
        self.val += [0, 0]
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.phase.append(False)
        self.decidable.append(decidable)
        self.watches += [[], []]
        self.bins += [[], []]
        self.hkey.append(None)
        if decidable:
            heapq.heappush(self.heap, (0.0, v, v))
            self.hkey[v] = 0.0
        return v

    def add_clause(self, lits) -> bool:
        """Add a clause at decision level 0."""
        if not self.ok:
            return False
        out = []
        seen = set()
        for l in lits:
            if self.val[l] == 1 or (l ^ 1) in seen:
                return True
            if self.val[l] == -1 or l in seen:
                continue
            seen.add(l)
            out.append(l)
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            self._assign(out[0], None)
            return True
        self._attach(out)
        return True

    def _attach(self, c) -> None:
        if len(c) == 2:
            a, b = c
            self.bins[a ^ 1].append(b)
            self.bins[b ^ 1].append(a)
        else:
            self.watches[c[0] ^ 1].append(c)
            self.watches[c[1] ^ 1].append(c)

    def set_loops(self, components) -> None:
        """components: list of (atom_vars, bodies) where bodies are
        (body_lit, head_var, [in-component positive body vars])."""
        for atoms, bodies in components:
            idx = len(self.sccs)
            occurs = {a: [] for a in atoms}
            for bi, (_, _, inner) in enumerate(bodies):
                for a in inner:
                    occurs[a].append(bi)
            self.sccs.append((atoms, bodies, occurs))
            for l in {2 * a for a in atoms} | {b for b, _, _ in bodies}:
                ks = self.ufs_watch.setdefault(l, [])
                if idx not in ks:
                    ks.append(idx)
            self.dirty.add(idx)

    # assignment ---------------------------------------------------------
    def _assign(self, lit: int, reason) -> None:
        self.val[lit] = 1
        self.val[lit ^ 1] = -1
        v = lit >> 1
        self.level[v] = len(self.lim)
        self.reason[v] = reason
        self.trail.append(lit)
        ks = self.ufs_watch.get(lit ^ 1)
        if ks:
            self.dirty.update(ks)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.lim) <= lvl:
            return
        start = self.lim[lvl]
        val, phase, heap, act = self.val, self.phase, self.heap, self.activity
        reason, decidable, hkey = self.reason, self.decidable, self.hkey
        push = heapq.heappush
        for i in range(len(self.trail) - 1, start - 1, -1):
            lit = self.trail[i]
            v = lit >> 1
            val[lit] = 0
            val[lit ^ 1] = 0
            reason[v] = None
            phase[v] = not (lit & 1)
            if decidable[v]:
                k = -act[v]
                if hkey[v] != k:
                    push(heap, (k, v, v))
                    hkey[v] = k
        del self.trail[start:]
        del self.lim[lvl:]
        self.qhead = len(self.trail)
        # after backtracking, components may have regained support
        self.dirty = set(range(len(self.sccs)))

    def _propagate(self):
        val, bins, watches, trail = self.val, self.bins, self.watches, self.trail
        level, reason, ufs, dirty = self.level, self.reason, self.ufs_watch, self.dirty
        lvl = len(self.lim)
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            f = p ^ 1
            for o in bins[p]:
                vo = val[o]
                if vo == 1:
                    continue
                if vo == -1:
                    return [o, f]
                val[o] = 1
                val[o ^ 1] = -1
                level[o >> 1] = lvl
                reason[o >> 1] = (o, f)
                trail.append(o)
                if ufs:
                    ks = ufs.get(o ^ 1)
                    if ks:
                        dirty.update(ks)
            ws = watches[p]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == f:
                    c[0] = c[1]
                    c[1] = f
                first = c[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = f
                        watches[lk ^ 1].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        return c
                    val[first] = 1
                    val[first ^ 1] = -1
                    level[first >> 1] = lvl
                    reason[first >> 1] = c
                    trail.append(first)
                    if ufs:
                        ks = ufs.get(first ^ 1)
                        if ks:
                            dirty.update(ks)
            del ws[j:]
        return None

    # stability ----------------------------------------------------------
    def _unfounded(self):
        """Falsify unfounded atoms.  Returns a conflict clause, True if
        something was assigned, or None when all components are founded."""
        val = self.val
        changed = False
        while self.dirty:
            k = self.dirty.pop()
            atoms, bodies, occurs = self.sccs[k]
            remaining = {}
            founded = set()
            queue = []
            for bi, (blit, head, inner) in enumerate(bodies):
                if val[blit] == -1 or val[2 * head] == -1:
                    continue
                if not inner:
                    queue.append(bi)
                else:
                    remaining[bi] = len(inner)
            while queue:
                bi = queue.pop()
                h = bodies[bi][1]
                if h in founded:
                    continue
                founded.add(h)
                for b2 in occurs[h]:
                    r = remaining.get(b2)
                    if r is not None:
                        r -= 1
                        remaining[b2] = r
                        if r == 0:
                            queue.append(b2)
            U = [a for a in atoms if val[2 * a] != -1 and a not in founded]
            if not U:
                continue
            uset = set(U)
            ext = []
            seen = set()
            for blit, head, inner in bodies:
                if head in uset and not any(a in uset for a in inner) and blit not in seen:
                    seen.add(blit)
                    ext.append(blit)
            # every external body is false here; a true atom means conflict
            for a in U:
                if val[2 * a] == 1:
                    self.dirty.add(k)
                    return [2 * a + 1] + ext
            for a in U:
                if val[2 * a] == 0:
                    c = [2 * a + 1] + ext
                    self._assign(2 * a + 1, c)
                    if len(c) > 1:
                        self._learn_watch(c)
            changed = True
            self.dirty.add(k)
            return True
        return None if not changed else True

    def _learn_watch(self, c) -> None:
        """Store an implied clause c (c[0] true, rest false)."""
        best = max(range(1, len(c)), key=lambda i: self.level[c[i] >> 1])
        c[1], c[best] = c[best], c[1]
        self._attach(c)

    # objective ----------------------------------------------------------
    def _check_bound(self):
        ob = self.objective
        if ob is None or ob.bound is None:
            return None
        val = self.val
        clause = []
        for (prio, lits), b in zip(ob.levels, ob.bound):
            s = 0
            for lit, w in lits:
                if val[lit] == 1:
                    s += w
                    clause.append(lit ^ 1)
            if s > b:
                return clause
            if s < b:
                return None
        return clause if ob.strict else None

    # search -------------------------------------------------------------
    def _analyze(self, confl):
        seen = set()
        learnt = [0]
        counter = 0
        p = -1
        idx = len(self.trail) - 1
        dl = len(self.lim)
        level, trail = self.level, self.trail
        clause = confl
        while True:
            for q in clause:
                if q == p:
                    continue
                v = q >> 1
                if v not in seen and level[v] > 0:
                    seen.add(v)
                    self._bump(v)
                    if level[v] >= dl:
                        counter += 1
                    else:
                        learnt.append(q)
            while (trail[idx] >> 1) not in seen:
                idx -= 1
            p = trail[idx]
            idx -= 1
            seen.discard(p >> 1)
            counter -= 1
            if counter == 0:
                break
            clause = self.reason[p >> 1]
        learnt[0] = p ^ 1
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda i: level[learnt[i] >> 1])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.inc
        if act[v] > 1e100:
            for i in range(len(act)):
                act[i] *= 1e-100
            self.inc *= 1e-100
            self.heap = [(-act[u], u, u) for u in range(2, self.nv + 1)
                         if self.decidable[u] and self.val[2 * u] == 0]
            heapq.heapify(self.heap)
            self.hkey = [None] * (self.nv + 1)
            for k, u, _ in self.heap:
                self.hkey[u] = k
        elif self.decidable[v] and self.val[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v, v))
            self.hkey[v] = -act[v]

    def _handle_conflict(self, confl) -> bool:
        """Learn from a conflict and backjump.  False means unsatisfiable."""
        self.conflicts += 1
        top = max((self.level[l >> 1] for l in confl), default=0)
        if top == 0:
            return False
        if top < len(self.lim):
            self._cancel_until(top)
        learnt, bj = self._analyze(confl)
        self.inc *= 1.05
        self._cancel_until(bj)
        if len(learnt) == 1:
            self._assign(learnt[0], None)
        else:
            self._attach(learnt)
            self._assign(learnt[0], learnt)
        return True

    def _decide(self) -> int:
        heap, val, hkey = self.heap, self.val, self.hkey
        pop = heapq.heappop
        while heap:
            a, _, v = pop(heap)
            if hkey[v] != a:
                continue
            hkey[v] = None
            if val[2 * v] == 0:
                return 2 * v if self.phase[v] else 2 * v + 1
        # stale heap entries may hide variables; rescan
        for v in range(2, self.nv + 1):
            if self.decidable[v] and val[2 * v] == 0:
                return 2 * v if self.phase[v] else 2 * v + 1
        return 0

    def _fixpoint(self):
        while True:
            confl = self._propagate()
            if confl is not None:
                return confl
            r = self._unfounded()
            if r is True:
                continue
            if r is not None:
                return r
            return self._check_bound()

    def search(self):
        """Find the next model; returns the trail literals or None."""
        if not self.ok:
            return None
        restart_at = 100
        luby_i = 1
        since = 0
        while True:
            confl = self._fixpoint()
            if confl is not None:
                if not self._handle_conflict(confl):
                    self.ok = False
                    return None
                since += 1
                continue
            if since >= restart_at and self.lim:
                self._cancel_until(0)
                luby_i += 1
                restart_at = 100 * _luby(luby_i)
                since = 0
                continue
            lit = self._decide()
            if lit == 0:
                return list(self.trail)
            self.lim.append(len(self.trail))
            self._assign(lit, None)

    def block_current(self) -> bool:
        """Exclude the current model by a clause over its decisions."""
        decisions = [self.trail[i] ^ 1 for i in self.lim]
        if not decisions:
            self.ok = False
            return False
        self._cancel_until(len(decisions) - 1)
        if len(decisions) == 1:
            self._assign(decisions[0], None)
        else:
            c = [decisions[-1]] + decisions[:-1]
            self._learn_watch(c)
            self._assign(c[0], c)
        return True

    def restart(self) -> None:
        self._cancel_until(0)

    def value(self, var: int) -> int:
        return self.val[2 * var]


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


class Translation:
    """Completion of a ground program into the engine."""

    def __init__(self, rules, true_set=(), undef_set=(), must_true=(), must_false=(), minimize=()):
        self.engine = e = Engine()
        self.var = {}
        self.atoms = []
        self._avars = set()
        self._bodies = {}
        self.unknown_assumptions = []
        support = {}
        normal_edges = []
        rules = list(rules)
        for a in true_set:
            rules.append(_Fact(a))
        for a in undef_set:
            rules.append(_Free(a))
        known = set()
        for r in rules:
            known.update(r.atoms())
        rules, minimize, possible = _simplify(rules, minimize)
        # atoms outside `possible` are false in every stable model
        self.impossible = frozenset(known - possible)
        base = set()
        for r in rules:
            base.update(r.atoms())
        for m in minimize:
            base.update(m.pos)
            base.update(m.neg)
        for a in sorted(base, key=lambda a: a.key()):
            self._atom(a)
        for r in rules:
            b = self._body(r.pos, r.neg)
            if r.head is None:
                e.add_clause([b ^ 1])
                continue
            h = self.var[r.head]
            if not r.choice:
                e.add_clause([b ^ 1, 2 * h])
            support.setdefault(h, []).append(b)
            normal_edges.append((h, b, [self.var[a] for a in r.pos]))
        for h, _ in self.atoms:
            bs = support.get(h, ())
            if TRUE_LIT in bs:
                continue
            e.add_clause([2 * h + 1] + sorted(set(bs)))
        for a in must_true:
            if a in self.var:
                e.add_clause([2 * self.var[a]])
            else:
                if a not in known:
                    self.unknown_assumptions.append(a)
                e.add_clause([])
        for a in must_false:
            if a in self.var:
                e.add_clause([2 * self.var[a] + 1])
        self._loops(normal_edges)
        self.objective = self._objective(minimize) if minimize else None

    def _atom(self, a):
        v = self.var.get(a)
        if v is None:
            v = self.engine.new_var(decidable=True)
            self.var[a] = v
            self.atoms.append((v, a))
            self._avars.add(v)
        return v

    def _body(self, pos, neg) -> int:
        lits = [2 * self._atom(a) for a in pos] + [2 * self._atom(a) + 1 for a in neg]
        if not lits:
            return TRUE_LIT
        if len(lits) == 1:
            return lits[0]
        key = tuple(sorted(set(lits)))
        b = self._bodies.get(key)
        if b is not None:
            return b
        e = self.engine
        bv = e.new_var()
        b = 2 * bv
        for l in key:
            e.add_clause([b ^ 1, l])
        e.add_clause([b] + [l ^ 1 for l in key])
        self._bodies[key] = b
        return b

    def _loops(self, edges) -> None:
        graph = {}
        for h, _, inner in edges:
            graph.setdefault(h, set()).update(inner)
        comps = []
        for comp in tarjan(graph):
            comp = set(comp)
            if len(comp) == 1:
                (a,) = comp
                if a not in graph.get(a, ()):
                    continue
            comps.append(comp)
        if not comps:
            return
        where = {}
        for i, comp in enumerate(comps):
            for a in comp:
                where[a] = i
        per = [[] for _ in comps]
        for h, b, inner in edges:
            i = where.get(h)
            if i is None:
                continue
            per[i].append((b, h, sorted({a for a in inner if where.get(a) == i})))
        self.engine.set_loops([(sorted(c), per[i]) for i, c in enumerate(comps)])

    def _objective(self, minimize):
        e = self.engine
        keys = {}
        for m in minimize:
            keys.setdefault(m.key, []).append(self._body(m.pos, m.neg))
        levels = {}
        self.offset = {}
        for (w, p, _), conds in sorted(keys.items(), key=lambda kv: (kv[0][1], kv[0][0], [t.key() for t in kv[0][2]])):
            levels.setdefault(p, [])
            if w == 0:
                continue
            if TRUE_LIT in conds:
                k = TRUE_LIT
            elif len(set(conds)) == 1:
                k = conds[0]
            else:
                kv = e.new_var()
                k = 2 * kv
                e.add_clause([k ^ 1] + sorted(set(conds)))
                for c in set(conds):
                    e.add_clause([c ^ 1, k])
            if w < 0:
                self.offset[p] = self.offset.get(p, 0) + w
                levels[p].append((k ^ 1, -w))
            else:
                levels[p].append((k, w))
        ordered = sorted(levels.items(), key=lambda kv: -kv[0])
        ob = _Bound(ordered)
        e.objective = ob
        return ob

    def model(self) -> frozenset:
        val = self.engine.val
        return frozenset(a for v, a in self.atoms if val[2 * v] == 1)

    def transformed_cost(self, cost: dict) -> list:
        return [cost.get(p, 0) - self.offset.get(p, 0) for p, _ in self.objective.levels]


class _Rule:
    __slots__ = ("head", "pos", "neg", "choice")

    def __init__(self, head, pos, neg, choice):
        self.head, self.pos, self.neg, self.choice = head, pos, neg, choice

    def atoms(self):
        if self.head is not None:
            yield self.head
        yield from self.pos
        yield from self.neg


def _simplify(rules, minimize):
    """Drop what cannot matter: atoms underivable even when every negative
    literal holds are false, and atoms derived by negation-free normal rules
    from such atoms are true."""
    possible = _closure(rules, lambda r: r.head is not None, ())
    certain = _closure(rules, lambda r: r.head is not None and not r.choice and not r.neg, ())
    out = []
    for r in rules:
        if any(a not in possible for a in r.pos) or any(a in certain for a in r.neg):
            continue
        pos = tuple(a for a in r.pos if a not in certain)
        neg = tuple(a for a in r.neg if a in possible)
        if r.head is not None and r.choice and r.head in certain:
            continue
        out.append(_Rule(r.head, pos, neg, r.choice))
    # minimize conditions keep their atoms; unsupported ones simply end up false
    return out, minimize, possible


def _closure(rules, usable, seed) -> set:
    """Least model of the usable rules, reading negative literals as true."""
    missing = {}
    watch: dict = {}
    model = set(seed)
    queue = []
    for i, r in enumerate(rules):
        if not usable(r):
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


class _Fact:
    __slots__ = ("head", "pos", "neg", "choice")

    def __init__(self, a):
        self.head, self.pos, self.neg, self.choice = a, (), (), False

    def atoms(self):
        yield self.head


class _Free(_Fact):
    def __init__(self, a):
        super().__init__(a)
        self.choice = True
