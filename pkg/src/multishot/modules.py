"""Modules (P, I, O): construction, compositionality and join."""
from __future__ import annotations

from dataclasses import dataclass

from .grounder.depgraph import dependency_graph, tarjan
from .grounder.ground import AtomBase, GroundProgramWithExternals, dump_rules, heads


@dataclass(frozen=True)
class Module:
    rules: frozenset = frozenset()
    inputs: frozenset = frozenset()
    outputs: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "rules", frozenset(self.rules))
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "outputs", frozenset(self.outputs))

    def atoms(self) -> frozenset:
        return self.inputs | self.outputs

    def check_invariants(self) -> None:
        assert not (self.inputs & self.outputs), "inputs and outputs overlap"
        hs = heads(self.rules)
        assert hs <= self.outputs, "a rule head is not an output"
        for r in self.rules:
            for a in r.atoms():
                assert a in self.inputs or a in self.outputs, f"atom {a} outside the module"

    def dump(self) -> str:
        return dump_rules(self.rules, inputs=self.inputs)


EMPTY = Module()


@dataclass(frozen=True)
class Violation:
    kind: str          # "output-overlap" | "cross-module-scc"
    witness: frozenset


@dataclass(frozen=True)
class CompositionalityReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self):
        if self.ok:
            return "compositional"
        parts = []
        for v in self.violations:
            atoms = ", ".join(str(a) for a in sorted(v.witness, key=lambda a: a.key()))
            parts.append(f"{v.kind}: {{{atoms}}}")
        return "; ".join(parts)


class NotCompositional(Exception):
    def __init__(self, report: CompositionalityReport):
        super().__init__(f"modules are not compositional ({report})")
        self.report = report


def module_from_grounding(g: GroundProgramWithExternals, C: AtomBase | frozenset) -> Module:
    """(P, (C + E) - heads(P), heads(P))."""
    base = C.atoms if isinstance(C, AtomBase) else frozenset(C)
    hs = heads(g.rules)
    return Module(frozenset(g.rules), (base | g.externals) - hs, frozenset(hs))


def sccs(rules) -> list:
    return [set(c) for c in tarjan(dependency_graph(rules))]


def check_compositional(m1: Module, m2: Module, lax: bool = False) -> CompositionalityReport:
    violations = []
    overlap = m1.outputs & m2.outputs
    if overlap:
        violations.append(Violation("output-overlap", frozenset(overlap)))
    if not lax and m1.rules and m2.rules:
        for comp in _cyclic_components(m1.rules | m2.rules):
            if comp & m1.outputs and comp & m2.outputs:
                violations.append(Violation("cross-module-scc", frozenset(comp)))
    return CompositionalityReport(tuple(violations))


def _cyclic_components(rules) -> list:
    graph = dependency_graph(rules)
    out = []
    for comp in tarjan(graph):
        if len(comp) > 1:
            out.append(set(comp))
    return out


def join(m1: Module, m2: Module, lax: bool = False) -> Module:
    report = check_compositional(m1, m2, lax)
    if not report.ok:
        raise NotCompositional(report)
    return Module(m1.rules | m2.rules,
                  (m1.inputs - m2.outputs) | (m2.inputs - m1.outputs),
                  m1.outputs | m2.outputs)


def module_stable_models(m: Module) -> set:
    """Stable models with every input left open (free choice)."""
    from .solver import ExternalAssignment, enumerate_stable
    res = enumerate_stable(m.rules, ExternalAssignment(frozenset(), m.inputs), limit=0)
    return {frozenset(x) for x in res.atom_sets()}
