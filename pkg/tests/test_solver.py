import pytest

from multishot.grounder import MinimizeGroundElement, choice, constraint, normal
from multishot.language import parse_atom
from multishot.solver import (
    Assumptions, ExternalAssignment, TooLarge, brute_force_stable, compare_costs, consequences, cost,
    enumerate_stable, is_stable, optimize,
)
from multishot.solver.engine import _luby


def A(s):
    return parse_atom(s)


def S(*names):
    return frozenset(A(n) for n in names)


def models(rules, v=None, a=None):
    return set(enumerate_stable(rules, v, a).atom_sets())


def test_even_negative_loop():
    rules = [normal(A("a"), (), (A("b"),)), normal(A("b"), (), (A("a"),))]
    assert models(rules) == {S("a"), S("b")}


def test_odd_negative_loop_has_no_model():
    assert models([normal(A("a"), (), (A("a"),))]) == set()


def test_positive_loop_is_unfounded():
    rules = [normal(A("a"), (A("b"),)), normal(A("b"), (A("a"),))]
    assert models(rules) == {frozenset()}


def test_loop_with_external_support():
    rules = [normal(A("a"), (A("b"),)), normal(A("b"), (A("a"),)), normal(A("a"), (), (A("c"),)),
             choice(A("c"))]
    assert models(rules) == {S("c"), S("a", "b")}


def test_constraint_filters():
    rules = [choice(A("a")), choice(A("b")), constraint((A("a"), A("b")))]
    assert models(rules) == {frozenset(), S("a"), S("b")}


def test_empty_program_has_one_empty_model():
    assert models([]) == {frozenset()}


def test_true_input_without_rule():
    rules = [normal(A("y"), (A("x"),))]
    assert models(rules, ExternalAssignment(S("x"))) == {S("x", "y")}


def test_undefined_input_is_free():
    rules = [normal(A("y"), (A("x"),))]
    assert models(rules, ExternalAssignment(frozenset(), S("x"))) == {frozenset(), S("x", "y")}


def test_true_assumption_acts_as_constraint():
    rules = [normal(A("y"), (A("x"),))]
    # x is an input left false: assuming it true cannot create support
    assert models(rules, None, Assumptions(S("x"))) == set()
    assert models(rules, ExternalAssignment(frozenset(), S("x")), Assumptions(S("x"))) == {S("x", "y")}


def test_false_assumption():
    rules = [choice(A("a")), choice(A("b"))]
    got = models(rules, None, Assumptions(frozenset(), S("a")))
    assert got == {frozenset(), S("b")}


def test_unknown_assumption_warns_and_fails():
    res = enumerate_stable([choice(A("a"))], None, Assumptions(S("zz")))
    assert not res.satisfiable
    assert res.warnings and "zz" in res.warnings[0]


def test_assignment_rejects_overlap():
    with pytest.raises(ValueError):
        ExternalAssignment(S("a"), S("a"))


def test_limit_and_exhaustion():
    rules = [choice(A("a")), choice(A("b"))]
    res = enumerate_stable(rules, limit=2)
    assert len(res.models) == 2 and not res.exhausted
    res = enumerate_stable(rules, limit=4)
    assert len(res.models) == 4 and res.exhausted


def test_models_are_stable_and_distinct():
    rules = [choice(A(f"p({i})")) for i in range(4)] + [
        normal(A("q"), (A("p(1)"),), (A("p(2)"),)), constraint((A("q"), A("p(3)")))]
    res = enumerate_stable(rules)
    sets = res.atom_sets()
    assert len(sets) == len(set(sets))
    assert all(is_stable(rules, m) for m in sets)
    assert set(sets) == brute_force_stable(rules)


def test_brute_force_guard():
    rules = [choice(A(f"p({i})")) for i in range(30)]
    with pytest.raises(TooLarge):
        brute_force_stable(rules)


def mini(w, p, t, pos=(), neg=()):
    return MinimizeGroundElement(w, p, tuple(A(x) for x in t), tuple(A(x) for x in pos), tuple(A(x) for x in neg))


def test_trivial_minimize():
    res = optimize([choice(A("a"))], minimize=[mini(1, 1, ("a",), ("a",))])
    assert res.atom_sets() == [frozenset()]
    assert res.models[0].cost == {1: 0}
    assert res.optimal


def test_higher_priority_dominates():
    rules = [choice(A("a")), choice(A("b")), constraint((), (A("a"), A("b")))]
    elems = [mini(1, 2, ("a",), ("a",)), mini(5, 1, ("b",), ("b",))]
    res = optimize(rules, minimize=elems)
    assert res.atom_sets() == [S("b")]
    assert res.models[0].cost == {2: 0, 1: 5}


def test_negative_weights_reward():
    rules = [choice(A("a"))]
    res = optimize(rules, minimize=[mini(-3, 0, ("a",), ("a",))])
    assert res.atom_sets() == [S("a")]
    assert res.models[0].cost == {0: -3}


def test_distinct_tuples_count_once():
    rules = [normal(A("a")), normal(A("b"))]
    elems = [mini(2, 0, ("t",), ("a",)), mini(2, 0, ("t",), ("b",))]
    assert cost(S("a", "b"), elems) == {0: 2}


def test_all_optimal_models():
    rules = [choice(A("a")), choice(A("b")), constraint((), (A("a"), A("b")))]
    elems = [mini(1, 0, ("a",), ("a",)), mini(1, 0, ("b",), ("b",))]
    res = optimize(rules, minimize=elems)
    assert set(res.atom_sets()) == {S("a"), S("b")}


def test_gated_objective_is_ignored_when_gate_is_false():
    rules = [choice(A("a"))]
    elems = [mini(-1, 0, ("a",), ("a", "gate"))]
    off = optimize(rules, ExternalAssignment(), minimize=elems)
    assert set(off.atom_sets()) == {frozenset(), S("a")}
    assert all(m.cost == {0: 0} for m in off.models)
    on = optimize(rules, ExternalAssignment(S("gate")), minimize=elems)
    assert on.atom_sets() == [S("a", "gate")]


def test_compare_costs():
    assert compare_costs({2: 0, 1: 9}, {2: 1, 1: 0}) == -1
    assert compare_costs({1: 3}, {1: 3}) == 0


def test_consequences():
    rules = [normal(A("a")), normal(A("b"), (A("a"),), (A("e"),)), normal(A("c"), (A("d"),))]
    true, false = consequences(rules, free=S("e"))
    assert A("a") in true
    assert A("c") in false
    assert A("b") not in true | false


def test_luby_prefix():
    assert [_luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]
