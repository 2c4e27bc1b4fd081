import pytest

from multishot import Control, corpus_text
from multishot.cli import CHECK_PROGRAM
from multishot.control import (
    SystemState, UnknownProgram, add, assign_external, cleanup, create, ground, release_external, solve,
)
from multishot.language import parse_atom
from multishot.modules import EMPTY, NotCompositional


def A(s):
    return parse_atom(s)


def S(*names):
    return frozenset(A(n) for n in names)


def rules_of(state):
    return sorted(str(r) for r in state.module.rules)


def test_create_partitions_listing1():
    s = create(corpus_text("listing1.lp"))
    assert s.subprograms.names() == ["base", "acid"]
    assert s.module == EMPTY


def test_create_empty():
    s = create("")
    assert s.structure() == SystemState().structure()


def test_add_to_empty_equals_create():
    text = corpus_text("simple.lp")
    assert add(create(""), text).structure() == create(text).structure()


def test_add_nothing_is_identity():
    s = create(corpus_text("simple.lp"))
    assert add(s, "").structure() == s.structure()


def test_add_new_program():
    s = add(create("a."), "#program extra. b.")
    assert "extra" in s.subprograms


def test_unknown_program():
    with pytest.raises(UnknownProgram):
        ground(create("a."), ["nope"])


def test_regrounding_normal_rules_is_not_compositional():
    s = ground(create("#program c(p). a(p)."), [("c", (1,))])
    with pytest.raises(NotCompositional):
        ground(s, [("c", (1,))])


def test_duplicate_parts_in_one_call():
    s = create("#program c(p). a(p) :- not b(p).")
    assert ground(s, [("c", (1,)), ("c", (1,))]).structure() == ground(s, [("c", (1,))]).structure()


def test_listing1_order_effect():
    s = create(corpus_text("listing1.lp"))
    base_first = ground(ground(s, ["base"]), [("acid", (42,))])
    acid_first = ground(ground(s, [("acid", (42,))]), ["base"])
    assert rules_of(base_first) == ["a(1).", "a(2).", "b(42).", "c(1,42) :- a(1).", "c(2,42) :- a(2)."]
    assert rules_of(acid_first) == ["a(1).", "a(2).", "b(42)."]


def test_new_inputs_default_to_false_and_old_values_survive():
    s = create(corpus_text("simple.lp"))
    s = ground(s, ["base"])
    s = assign_external(s, "p(3)", "t")
    s = ground(s, [("succ", (1,)), ("succ", (2,))])
    assert s.assignment.true_set == S("p(3)")
    assert A("p(4)") in s.module.inputs
    assert s.assignment.value(A("p(4)")) == "f"


def test_assign_false_on_external_is_noop():
    s = ground(create(corpus_text("external.lp")), ["base"])
    assert assign_external(s, "e(1)", "f").structure() == s.structure()


def test_assign_on_defined_atom_is_identity():
    s = ground(create(corpus_text("simple.lp")), ["base"])
    assert assign_external(s, "p(0)", "t").structure() == s.structure()


def test_release_unknown_atom_is_identity():
    s = ground(create(corpus_text("simple.lp")), ["base"])
    assert release_external(s, "zz").structure() == s.structure()


def test_released_atom_cannot_come_back():
    s = ground(create("#program c(k). #external e(k). #program d(k). e(k)."), [("c", (1,))])
    s = release_external(s, "e(1)")
    assert A("e(1)") in s.module.outputs
    with pytest.raises(NotCompositional):
        ground(s, [("d", (1,))])


def test_false_assumption_on_listing4_state():
    s = ground(create(corpus_text("external.lp")), ["base"])
    assert not solve(s, ([], ["b(1)"])).satisfiable
    assert solve(s).atom_sets() == [S("b(1)", "b(2)", "f(1)", "f(2)")]


def test_solve_on_empty_state():
    assert solve(create("")).atom_sets() == [frozenset()]


def test_solve_leaves_state_alone():
    s = ground(create(corpus_text("simple.lp")), ["base"])
    s = assign_external(s, "p(3)", "t")
    before = s.structure()
    solve(s, limit=0)
    assert s.structure() == before


def test_model_callback_sees_every_model():
    s = ground(create("{a}. {b}."), ["base"])
    seen = []
    res = solve(s, on_model=seen.append, limit=0)
    assert len(seen) == len(res.models) == 4


def test_constants_from_the_outside_win():
    s = create("#const n = 2. p(n).", {"n": 5})
    assert rules_of(ground(s, ["base"])) == ["p(5)."]
    assert rules_of(ground(create("#const n = 2. p(n)."), ["base"])) == ["p(2)."]


def test_parameters_shadow_constants():
    s = create("#program s(n). p(n).", {"n": 5})
    assert rules_of(ground(s, [("s", (1,))])) == ["p(1)."]


def test_cleanup_hides_released_atoms():
    c = Control(corpus_text("tohI.lp", "tohE.lp") + CHECK_PROGRAM)
    c.ground([("base", ()), ("check", (0,))])
    c.assign_external("query(0)", "t")
    c.release_external("query(0)")
    c.ground([("step", (1,)), ("check", (1,))])
    c.assign_external("query(1)", "t")
    before = set(c.solve(limit=0).atom_sets())
    c.cleanup()
    assert A("query(0)") not in c.state.atom_base().atoms
    assert set(c.solve(limit=0).atom_sets()) == before


def test_cleanup_keeps_hanoi_models():
    plain = Control(corpus_text("tohI.lp", "tohE.lp") + CHECK_PROGRAM)
    tidy = Control(corpus_text("tohI.lp", "tohE.lp") + CHECK_PROGRAM)
    for k in range(4):
        for c in (plain, tidy):
            if k == 0:
                c.ground([("base", ()), ("check", (0,))])
            else:
                c.release_external(f"query({k - 1})")
                c.ground([("step", (k,)), ("check", (k,))])
            # leave the goal open so there is something to enumerate
            c.assign_external(f"query({k})", "f")
        tidy.cleanup()
        assert set(plain.solve(limit=0).atom_sets()) == set(tidy.solve(limit=0).atom_sets())


def test_cleanup_on_empty_state():
    s = create("")
    assert cleanup(s) is s


def test_trace_notation():
    c = Control(corpus_text("simple.lp"))
    c.ground(["base"])
    c.assign_external("p(3)", True)
    c.solve(([], []))
    c.release_external("p(3)")
    c.cleanup()
    assert c.trace == ["create", "ground((base,()))", "assignExternal(p(3),t)", "solve(({},{}))",
                       "releaseExternal(p(3))", "cleanup"]


def test_replaying_a_sequence_gives_identical_results():
    def run():
        c = Control(corpus_text("simple.lp"))
        out = []
        c.ground(["base"])
        c.assign_external("p(3)", "t")
        out.append(c.solve(limit=0).atom_sets())
        c.ground([("succ", (1,)), ("succ", (2,))])
        out.append(c.solve(limit=0).atom_sets())
        return out, c.state.structure()
    assert run() == run()
