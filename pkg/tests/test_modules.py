import pytest

from multishot import Control, corpus_text
from multishot.grounder import choice, constraint, normal
from multishot.language import parse_atom
from multishot.modules import (
    EMPTY, Module, NotCompositional, check_compositional, join, module_from_grounding, module_stable_models,
)
from multishot.grounder import AtomBase, GroundProgramWithExternals


def A(s):
    return parse_atom(s)


def S(*names):
    return frozenset(A(n) for n in names)


def test_at_most_one_first_instance():
    c = Control(corpus_text("atmostone.lp"))
    c.ground([("step", (1,))])
    assert c.module == Module({choice(A("q(1)"))}, frozenset(), S("q(1)"))


def test_exactly_one_first_instance_keeps_input():
    c = Control(corpus_text("exactlyone.lp"))
    c.ground([("step", (1,))])
    m = c.module
    assert A("a(1)") in m.inputs
    assert A("q(1)") in m.outputs
    assert constraint((A("a(1)"), A("q(1)"))) in m.rules
    assert constraint((), (A("a(1)"), A("q(1)"))) in m.rules


def test_module_from_grounding():
    g = GroundProgramWithExternals((normal(A("a"), (A("b"),)),), S("e"))
    m = module_from_grounding(g, AtomBase(S("b", "c")))
    assert m.inputs == S("b", "c", "e")
    assert m.outputs == S("a")


def test_join_fields():
    m1 = Module({normal(A("a"), (A("b"),))}, S("b"), S("a"))
    m2 = Module({normal(A("b"), (), (A("c"),))}, S("c"), S("b"))
    j = join(m1, m2)
    assert j.inputs == S("c")
    assert j.outputs == S("a", "b")
    assert j.rules == m1.rules | m2.rules


def test_join_with_empty_is_identity():
    m = Module({normal(A("a"))}, frozenset(), S("a"))
    assert join(EMPTY, m) == m
    assert join(m, EMPTY) == m


def test_output_overlap_is_rejected():
    m1 = Module({normal(A("a"))}, frozenset(), S("a"))
    m2 = Module({normal(A("a"), (A("b"),))}, S("b"), S("a"))
    rep = check_compositional(m1, m2)
    assert [v.kind for v in rep.violations] == ["output-overlap"]
    with pytest.raises(NotCompositional):
        join(m1, m2)


def test_positive_cycle_across_modules_is_rejected():
    m1 = Module({normal(A("a"), (A("b"),))}, S("b"), S("a"))
    m2 = Module({normal(A("b"), (A("a"),))}, S("a"), S("b"))
    rep = check_compositional(m1, m2)
    assert [v.kind for v in rep.violations] == ["cross-module-scc"]
    # lax mode only keeps the overlap check
    assert check_compositional(m1, m2, lax=True).ok


def test_negative_cycle_across_modules_is_fine():
    m1 = Module({normal(A("a"), (), (A("b"),))}, S("b"), S("a"))
    m2 = Module({normal(A("b"), (), (A("a"),))}, S("a"), S("b"))
    assert check_compositional(m1, m2).ok


def test_stable_models_with_open_inputs():
    m = Module({normal(A("a"), (A("e"),))}, S("e"), S("a"))
    assert module_stable_models(m) == {frozenset(), S("a", "e")}


def test_invariants():
    m = Module({normal(A("a"), (A("b"),))}, S("b"), S("a"))
    m.check_invariants()
    with pytest.raises(AssertionError):
        Module({normal(A("a"))}, frozenset(), frozenset()).check_invariants()


def test_dump_lists_inputs():
    m = Module({normal(A("a"), (A("b"),))}, S("b"), S("a"))
    assert m.dump() == "a :- b.\n#input b.\n"
