import pytest

from nksim.core import (Program, ProgramBuilder, ProgramError, Rule, RuleKind, Solution, basic,
                        cardinality, choice, constraint, neg, notnot, parse_atom_name, pos,
                        predicate_of, project)


def test_basic_rule_needs_one_head():
    with pytest.raises(ProgramError):
        Rule(RuleKind.BASIC, (1, 2))
    with pytest.raises(ProgramError):
        Rule(RuleKind.CONSTRAINT, (1,))


def test_choice_bounds_checked():
    choice([1, 2], bounds=(0, 2))
    with pytest.raises(ProgramError):
        choice([1, 2], bounds=(2, 1))
    with pytest.raises(ProgramError):
        choice([1, 2], bounds=(0, 3))


def test_cardinality_rejects_double_negation():
    with pytest.raises(ProgramError):
        cardinality(None, 1, [notnot(1)])


def test_program_validates_references():
    with pytest.raises(ProgramError):
        Program((None, "p"), (basic(2),))
    with pytest.raises(ProgramError):
        Program((None, "p", "p"))
    with pytest.raises(ProgramError):
        Program((None, "p"), (), frozenset({5}))


def test_atom_names():
    assert parse_atom_name("edge(3,a)") == ("edge", ("3", "a"))
    assert parse_atom_name("p") == ("p", ())
    assert parse_atom_name("f(g(1,2),3)") == ("f", ("g(1,2)", "3"))
    assert predicate_of("moveop(a,table,3)") == "moveop/3"


def test_builder_interns_names():
    b = ProgramBuilder()
    assert b.atom("p") == b.atom("p") == 1
    assert b.atom() == 2
    p = b.build()
    assert p.size == 2 and p.key(2) == "_2"


def test_distinguished_defaults_to_named_atoms():
    b = ProgramBuilder()
    b.atom("p")
    b.atom()
    b.atom("q")
    assert b.build().distinguished_ids() == {1, 3}


def test_with_distinguished_by_predicate():
    b = ProgramBuilder()
    e1, e2, aux = b.atom("edge(2,1)"), b.atom("edge(3,1)"), b.atom("aux(3)")
    p = b.build()
    for selectors in (["edge"], ["edge/2"]):
        assert p.with_distinguished(selectors).distinguished_ids() == {e1, e2}
    assert p.with_distinguished(["aux(3)"]).distinguished_ids() == {aux}
    assert p.with_distinguished(["edge/1"]).distinguished_ids() == frozenset()


def test_project_examples():
    b = ProgramBuilder()
    e, aux = b.atom("edge(2,1)"), b.atom("aux(3)")
    p = b.build(distinguished=["edge/2"])
    s = project({e, aux}, p)
    assert s.atoms == {e} and s.origin == {e, aux} and s.names == {"edge(2,1)"}
    full = b.build()
    assert project({e, aux}, full).atoms == {e, aux}
    assert project(set(), p).atoms == frozenset()


def test_solution_equality_ignores_program():
    a = Solution(frozenset({1}), frozenset({1}), None)
    b = Solution(frozenset({1}), frozenset({1}), Program((None, "p")))
    assert a == b and hash(a) == hash(b)
