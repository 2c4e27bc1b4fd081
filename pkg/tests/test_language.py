import pytest

from multishot import corpus_text
from multishot.language import (
    ArityError, ChoiceRule, Constraint, ExternalDecl, MinimizeDecl, NormalRule, Number, ParseError,
    ProgramDecl, ShowDecl, UnsafeError, parse_atom, parse_program, parse_term, render,
    split_subprograms, substitute,
)
from multishot.language.terms import sorted_atoms


def test_statement_kinds():
    p = parse_program("""
        #program acid(k).
        b(k).
        c(X,k) :- a(X).
        #show q/2.
        { q(X) : r(X) } 1 :- s.
        :- not t.
        #minimize { 2@1,X : p(X) }.
        #external e(X) : r(X).
    """)
    kinds = [type(s) for s in p]
    assert kinds == [ProgramDecl, NormalRule, NormalRule, ShowDecl, ChoiceRule, Constraint, MinimizeDecl, ExternalDecl]


def test_const_directive_is_collected():
    p = parse_program("#const n = 3. q(n).")
    assert p.constants == {"n": Number(3)}


def test_incmode_include_flag():
    assert parse_program("#include <incmode>. a.").incmode
    assert not parse_program("a.").incmode


@pytest.mark.parametrize("text", ["p(X).", "p(X) :- not q(X).", ":- X > 1."])
def test_unsafe_rules_rejected(text):
    with pytest.raises(UnsafeError):
        parse_program(text)


def test_safe_rule_accepted():
    assert len(parse_program("p(X) :- q(X).")) == 1


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as e:
        parse_program("a :- .")
    assert e.value.line == 1


def test_render_round_trip():
    src = corpus_text("simple.lp", "queens.lp", "tohE.lp")
    once = render(parse_program(src))
    assert render(parse_program(once)) == once


def test_terms_print_back():
    for s in ["1..3", "(a;b)", "f(X+1,-2)", "g(h(1),x)"]:
        assert str(parse_term(s)) == s


def test_split_into_subprograms():
    table = split_subprograms(parse_program(corpus_text("simple.lp")))
    assert table.names() == ["base", "succ"]
    assert table["succ"].params == ("n",)
    assert len(table["base"].statements) == 3


def test_statements_before_any_program_go_to_base():
    table = split_subprograms(parse_program(corpus_text("listing1.lp")))
    # a(1) precedes every #program directive, a(2) follows '#program base.'
    assert [str(s) for s in table["base"].statements] == ["a(1).", "a(2)."]
    assert table["acid"].params == ("k",)


def test_parameter_substitution():
    table = split_subprograms(parse_program(corpus_text("simple.lp")))
    got = [str(s) for s in substitute(table["succ"], (Number(1),))]
    assert got == ["#external p(1+3).", "p(1) :- p(1+3).", "p(1) :- not p(1+1), not p(1+2)."]


def test_substitution_arity_checked():
    table = split_subprograms(parse_program(corpus_text("simple.lp")))
    with pytest.raises(ArityError):
        substitute(table["succ"], ())


def test_conflicting_parameter_lists():
    with pytest.raises(ParseError):
        parse_program("#program s(n). a. #program s(m). b.")
    a = split_subprograms(parse_program("#program s(n). a."))
    with pytest.raises(ArityError):
        a.merge(split_subprograms(parse_program("#program s(m). b.")))


def test_merge_keeps_first_copy_of_duplicates():
    a = split_subprograms(parse_program("x. y."))
    b = split_subprograms(parse_program("y. z."))
    assert [str(s) for s in a.merge(b)["base"].statements] == ["x.", "y.", "z."]


def test_canonical_atom_order():
    atoms = [parse_atom(s) for s in ["p(b)", "p(10)", "p(2)", "q", "p(a)"]]
    # numbers before symbols, numbers by value
    assert [str(a) for a in sorted_atoms(atoms)] == ["p(2)", "p(10)", "p(a)", "p(b)", "q"]
