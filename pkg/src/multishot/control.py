"""System states and the operations that evolve them."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

from .grounder import (
    DEFAULT_INSTANCE_CAP, AtomBase, GroundingResult, heads, instantiate, next_aux_id,
    simplify_with_facts,
)
from .language import Atom, SubprogramTable, parse_atom, parse_program, parse_term, split_subprograms
from .language.program import subst_term, substitute, substitute_statement
from .language.terms import Term, sorted_atoms, term_from_value
from .modules import (
    EMPTY, CompositionalityReport, Module, NotCompositional, Violation, join, module_from_grounding,
)
from .solver import NO_ASSUMPTIONS, Assumptions, ExternalAssignment, SolveResult, consequences, enumerate_stable

log = logging.getLogger(__name__)

TRUTH = {"t": "t", "true": "t", True: "t", "u": "u", "undef": "u", "free": "u", None: "u",
         "f": "f", "false": "f", False: "f"}


class UnknownProgram(KeyError):
    pass


@dataclass(frozen=True)
class SystemState:
    subprograms: SubprogramTable = SubprogramTable()
    module: Module = EMPTY
    assignment: ExternalAssignment = ExternalAssignment()
    minimize: tuple = ()
    shows: tuple = ()
    released: frozenset = frozenset()
    # grounder-side bookkeeping maintained by cleanup
    hidden: frozenset = frozenset()
    facts: frozenset = frozenset()
    constants: tuple = ()

    def structure(self) -> tuple:
        return (self.subprograms, self.module, self.assignment, self.released)

    def atom_base(self) -> AtomBase:
        atoms = self.module.atoms() - self.hidden
        return AtomBase(frozenset(atoms), frozenset(self.facts & atoms))


def _constants(constants) -> tuple:
    if not constants:
        return ()
    items = constants.items() if isinstance(constants, dict) else constants
    out = []
    for k, v in items:
        if not isinstance(v, Term):
            v = parse_term(v) if isinstance(v, str) else term_from_value(v)
        out.append((k, v))
    return tuple(sorted(out, key=lambda kv: kv[0]))


def _merge_constants(old: tuple, new: dict) -> tuple:
    merged = dict(old)
    for k, v in new.items():
        merged.setdefault(k, v)
    return tuple(sorted(merged.items(), key=lambda kv: kv[0]))


def create(text: str = "", constants=None) -> SystemState:
    """`constants` (e.g. from the command line) override #const definitions."""
    parsed = parse_program(text)
    return SystemState(subprograms=split_subprograms(parsed),
                       constants=_merge_constants(_constants(constants), parsed.constants))


def add(state: SystemState, text: str) -> SystemState:
    parsed = parse_program(text)
    return replace(state, subprograms=state.subprograms.merge(split_subprograms(parsed)),
                   constants=_merge_constants(state.constants, parsed.constants))


def _resolve(consts: dict) -> dict:
    # constants may mention other constants
    for _ in range(len(consts)):
        nxt = {k: subst_term(v, consts) for k, v in consts.items()}
        if nxt == consts:
            break
        consts = nxt
    return consts


def _norm_parts(parts) -> list:
    out = []
    for part in parts:
        if isinstance(part, str):
            name, args = part, ()
        else:
            name, args = part
        args = tuple(a if isinstance(a, Term) else term_from_value(a) for a in args)
        if (name, args) not in out:
            out.append((name, args))
    return out


def ground_with_result(state: SystemState, parts, lax: bool = False, simplify: bool = False,
                       instance_cap: int = DEFAULT_INSTANCE_CAP):
    """ground() that also hands back the raw grounding result."""
    parts = _norm_parts(parts)
    stmts = []
    consts = _resolve(dict(state.constants))
    for name, args in parts:
        if name not in state.subprograms:
            raise UnknownProgram(f"unknown program {name!r}")
        sub = state.subprograms[name]
        for st in substitute(sub, args):
            # parameters shadow command-line constants
            stmts.append(substitute_statement(st, {k: v for k, v in consts.items() if k not in sub.params}))
    m = state.module
    C = state.atom_base()
    res = instantiate(stmts, C, instance_cap, next_aux_id(m.atoms() | state.released))
    prog = res.program
    if simplify:
        prog = simplify_with_facts(prog, C.facts | prog.base_out.facts)
    # released atoms are denied both statuses for good
    bad = []
    clash = heads(prog.rules) & state.released
    if clash:
        bad.append(Violation("released-redefinition", frozenset(clash)))
    again = prog.externals & state.released
    if again:
        bad.append(Violation("released-redeclaration", frozenset(again)))
    if bad:
        raise NotCompositional(CompositionalityReport(tuple(bad)))
    new = join(m, module_from_grounding(prog, C), lax)
    v = state.assignment
    v = ExternalAssignment(v.true_set & new.inputs, v.undef_set & new.inputs)
    mins = list(state.minimize)
    for e in res.minimize:
        if e not in mins:
            mins.append(e)
    shows = list(state.shows)
    for s in res.shows:
        if s not in shows:
            shows.append(s)
    facts = state.facts | (prog.base_out.facts & new.outputs)
    out = replace(state, module=new, assignment=v, minimize=tuple(mins), shows=tuple(shows), facts=facts)
    return out, GroundingResult(prog, res.minimize, res.shows, res.warnings)


def ground(state: SystemState, parts, lax: bool = False, simplify: bool = False,
           instance_cap: int = DEFAULT_INSTANCE_CAP) -> SystemState:
    return ground_with_result(state, parts, lax, simplify, instance_cap)[0]


def _atom(a) -> Atom:
    return parse_atom(a) if isinstance(a, str) else a


def assign_external(state: SystemState, atom, value) -> SystemState:
    a = _atom(atom)
    val = TRUTH[value.lower() if isinstance(value, str) else value]
    if a not in state.module.inputs:
        if a not in state.module.atoms():
            log.warning("assignExternal: %s is not a known atom", a)
        return state
    v = state.assignment
    t, u = v.true_set - {a}, v.undef_set - {a}
    if val == "t":
        t = t | {a}
    elif val == "u":
        u = u | {a}
    return replace(state, assignment=ExternalAssignment(t, u))


def release_external(state: SystemState, atom) -> SystemState:
    a = _atom(atom)
    m = state.module
    if a not in m.inputs:
        return state
    v = state.assignment
    return replace(state,
                   module=Module(m.rules, m.inputs - {a}, m.outputs | {a}),
                   assignment=ExternalAssignment(v.true_set - {a}, v.undef_set - {a}),
                   released=state.released | {a})


def _assumptions(a) -> Assumptions:
    if a is None:
        return NO_ASSUMPTIONS
    if isinstance(a, Assumptions):
        return a
    t, f = a
    return Assumptions(frozenset(_atom(x) for x in t), frozenset(_atom(x) for x in f))


def solve(state: SystemState, assumptions=None, on_model=None, limit: int = 0) -> SolveResult:
    return enumerate_stable(state.module.rules, state.assignment, _assumptions(assumptions),
                            limit=limit, minimize=state.minimize, on_model=on_model)


def cleanup(state: SystemState) -> SystemState:
    """Hide atoms that are false whatever the inputs; flag those that are true."""
    m = state.module
    hidden = state.hidden | state.released
    facts = state.facts
    cons = consequences(m.rules, free=m.inputs)
    if cons is not None:
        true, false = cons
        hidden |= false & m.outputs
        facts |= true & m.outputs
    facts -= hidden
    if hidden == state.hidden and facts == state.facts:
        return state
    return replace(state, hidden=frozenset(hidden), facts=frozenset(facts))


# trace notation

def _fmt_args(args) -> str:
    return "(" + ",".join(str(a) for a in args) + ")"


def _fmt_set(atoms) -> str:
    return "{" + ",".join(str(a) for a in sorted_atoms(atoms)) + "}"


@dataclass
class Ledger:
    """Running unions used to check the module fields after each ground call."""
    rules: set = field(default_factory=set)
    externals: set = field(default_factory=set)
    heads: set = field(default_factory=set)

    def check(self, state: SystemState) -> bool:
        m = state.module
        return (m.rules == frozenset(self.rules)
                and m.inputs == frozenset(self.externals - self.heads - state.released)
                and m.outputs == frozenset(self.heads | state.released))


class Control:
    """Stateful convenience wrapper that records an operation trace."""

    def __init__(self, text: str = "", constants=None, lax: bool = False, simplify: bool = False,
                 instance_cap: int = DEFAULT_INSTANCE_CAP):
        self.state = create(text, constants)
        self.lax = lax
        self.simplify = simplify
        self.instance_cap = instance_cap
        self.trace = ["create"]
        self.ledger = Ledger()
        self.warnings: list = []
        self.calls = 0

    def add(self, text: str) -> None:
        self.state = add(self.state, text)
        self.trace.append("add")

    def ground(self, parts) -> None:
        parts = _norm_parts(parts)
        self.state, res = ground_with_result(self.state, parts, self.lax, self.simplify, self.instance_cap)
        self.warnings.extend(res.warnings)
        self.ledger.rules.update(res.program.rules)
        self.ledger.externals.update(res.program.externals)
        self.ledger.heads.update(heads(res.program.rules))
        self.trace.append("ground(" + ",".join(f"({n},{_fmt_args(a)})" for n, a in parts) + ")")

    def assign_external(self, atom, value) -> None:
        a = _atom(atom)
        self.state = assign_external(self.state, a, value)
        val = TRUTH[value.lower() if isinstance(value, str) else value]
        self.trace.append(f"assignExternal({a},{val})")

    def release_external(self, atom) -> None:
        a = _atom(atom)
        self.state = release_external(self.state, a)
        self.trace.append(f"releaseExternal({a})")

    def solve(self, assumptions=None, on_model=None, limit: int = 0) -> SolveResult:
        a = _assumptions(assumptions)
        self.trace.append(f"solve(({_fmt_set(a.must_true)},{_fmt_set(a.must_false)}))")
        self.calls += 1
        res = solve(self.state, a, on_model, limit)
        self.warnings.extend(res.warnings)
        return res

    def cleanup(self) -> None:
        self.state = cleanup(self.state)
        self.trace.append("cleanup")

    def ledger_holds(self) -> bool:
        return self.ledger.check(self.state)

    @property
    def module(self) -> Module:
        return self.state.module

    @property
    def shows(self) -> tuple:
        return self.state.shows
