import time

import pytest
from hypothesis import given, settings

from nksim.core import Program, choice, enumerate_bruteforce, is_answer_set, parse, project
from nksim.distances import DistancePruner, Mode, Nodal
from nksim.engine import (BACKTRACKED, EXHAUSTED, SearchState, SearchTimeout, Stable, Unstable,
                          compile, enumerate_answer_sets, lit_of)
from nksim.testkit import RandomParams, gen_random, gen_subsets, gen_trees

from strategies import programs


def projections(p, sets):
    d = p.distinguished_ids()
    return [frozenset(X) & d for X in sets]


def random_programs(count, **kw):
    for seed in range(count):
        rng_atoms = 3 + seed % 8
        yield gen_random(RandomParams(seed=seed, atoms=rng_atoms, rules=4 + seed % 17,
                                      choice_fraction=0.15, card_fraction=0.1, **kw))


# -- compile ------------------------------------------------------------------

def test_compile_counts_for_even_loop():
    s = compile(parse("p :- not q. q :- not p."))
    assert s.count("body") == 4
    assert s.count("support") == 2


def test_empty_program_yields_empty_set_once():
    s = compile(Program())
    assert s.count("body") == s.count("support") == s.count("rule") == 0
    assert s.next_answer_set() == frozenset()
    assert s.next_answer_set() is None


def test_unsupported_constraint_has_no_answer_set():
    assert compile(parse(":- not p.")).next_answer_set() is None


# -- propagate / select / resolve ------------------------------------------------

def test_propagate_forces_unsupported_head_false():
    p = parse("{q}. p :- not q.")
    s = compile(p)
    assert s.propagate() is None
    q, pp = p.lookup("q"), p.lookup("p")
    s.decide(lit_of(q, True))
    assert s.propagate() is None
    assert s.is_false(lit_of(pp, True))


def test_propagate_without_unit_nogoods_changes_nothing():
    s = compile(Program())
    before = list(s.trail)
    assert s.propagate() is None and s.trail == before
    s = compile(gen_subsets(["a", "b"]))
    s.propagate()
    before = list(s.trail)
    assert s.propagate() is None and s.trail == before


def test_propagate_reports_direct_violation():
    p = parse("{p; q}. :- p, q.")
    s = compile(p)
    s.propagate()
    s.decide(lit_of(p.lookup("p"), True))
    s.decide(lit_of(p.lookup("q"), True))
    ng = s.propagate()
    assert ng is not None and all(s.is_true(l) for l in ng)


def test_select_lowest_unassigned_false():
    s = compile(gen_subsets(["a", "b", "c"]))
    s.propagate()
    s.decide(lit_of(1, True))
    assert s.select() == lit_of(2, False)


def test_select_reaches_unnamed_atoms():
    p = Program((None, "a", "b", None), (choice([1, 2, 3]),))
    s = compile(p)
    s.propagate()
    s.decide(lit_of(1, True))
    s.decide(lit_of(2, True))
    assert s.select() == lit_of(3, False)


def test_activity_heuristic_is_seeded():
    p = gen_trees(4)
    runs = []
    for _ in range(2):
        s = compile(p, heuristic="activity", seed=7)
        picks = []
        real = s.select
        s.select = lambda: picks.append(real()) or picks[-1]
        list(s)
        runs.append(picks)
    assert runs[0] == runs[1]


def test_resolve_flips_single_decision():
    p = parse("{p}. :- p.")
    s = compile(p)
    s.propagate()
    s.decide(lit_of(1, True))
    ng = s.propagate()
    if ng is None:
        pytest.skip("conflict already caught at level 0")
    assert s.resolve_conflict(ng) == BACKTRACKED
    assert s.decision_level() == 1 and s.decisions[0] == (lit_of(1, False), True)


def test_resolve_at_level_zero_exhausts():
    s = compile(parse("p. :- p."))
    ng = s.propagate()
    assert ng is not None and s.decision_level() == 0
    assert s.resolve_conflict(ng) == EXHAUSTED


def test_uip_nogoods_are_asserting():
    deep = 0
    for p in random_programs(200):
        s = compile(p, learning=True)
        real = s._analyze

        def analyze(violated, lvl, real=real, s=s):
            nonlocal deep
            learned, uip, bj = real(violated, lvl)
            at = [l for l in learned if s.level[l >> 1] == lvl]
            assert at == [uip]
            assert bj < lvl
            deep += lvl >= 3
            return learned, uip, bj

        s._analyze = analyze
        list(s)
    assert deep > 0


def test_trail_sane_after_resolve():
    for learning in (False, True):
        for p in random_programs(100):
            s = compile(p, learning=learning)
            real = s.resolve_conflict

            def resolve(ng, real=real, s=s):
                out = real(ng)
                if out == BACKTRACKED:
                    assert not any(all(s.is_true(l) for l in g) for g in s.nogoods)
                    lv = [s.level[l >> 1] for l in s.trail]
                    assert lv == sorted(lv)
                return out

            s.resolve_conflict = resolve
            list(s)


# -- stability --------------------------------------------------------------------

def test_positive_loop_unstable():
    p = parse("{r}. p :- q. q :- p. p :- r.")
    s = compile(p)
    a, b = p.lookup("p"), p.lookup("q")
    st = s.check_stability({a, b})
    assert isinstance(st, Unstable) and st.unfounded == {a, b}
    assert st.loop_nogoods
    assert isinstance(s.check_stability(set()), Stable)


def test_tight_programs_completion_models_stable():
    for p in random_programs(100, neg_fraction=1.0):
        # all-negative bodies: no positive loops
        for X in enumerate_answer_sets(p):
            assert isinstance(compile(p).check_stability(X), Stable)


# -- enumeration --------------------------------------------------------------------

def test_even_loop_yields_both():
    p = parse("p :- not q. q :- not p.")
    assert set(enumerate_answer_sets(p)) == {frozenset({1}), frozenset({2})}


def test_subsets_enumerated():
    p = gen_subsets(["a", "b", "c"])
    assert len(set(enumerate_answer_sets(p))) == 8


@pytest.mark.parametrize("learning", [False, True])
@pytest.mark.parametrize("heuristic", ["lowest", "activity"])
def test_completeness_against_oracle(learning, heuristic):
    for seed in range(200):
        p = gen_random(RandomParams(seed=seed, atoms=3 + seed % 8, rules=5 + seed % 16,
                                    choice_fraction=0.2, card_fraction=0.1))
        got = enumerate_answer_sets(p, learning=learning, heuristic=heuristic, seed=seed)
        assert all(is_answer_set(p, X) for X in got)
        assert sorted(map(sorted, got)) == sorted(map(sorted, enumerate_bruteforce(p)))


@given(programs(max_atoms=6, max_rules=10))
@settings(max_examples=150)
def test_engine_matches_oracle_on_extended_programs(p):
    got = enumerate_answer_sets(p)
    assert sorted(map(sorted, got)) == sorted(map(sorted, enumerate_bruteforce(p)))


def test_blocking_on_projection():
    p = parse("{a; b}. #show a.")
    got = enumerate_answer_sets(p)
    proj = projections(p, got)
    assert len(proj) == len(set(proj)) == 2


def test_learned_nogoods_persist_across_solutions():
    p = gen_trees(4)
    s = compile(p, learning=True)
    seen = 0
    for _ in s:
        n = s.count("learned")
        assert n >= seen
        seen = n


def test_pruner_results_are_subset():
    p = gen_trees(4)
    full = set(projections(p, enumerate_answer_sets(p)))
    for mode in Mode:
        for k in range(0, 10, 2):
            s = compile(p, pruner=DistancePruner(Nodal(), mode, k))
            got = list(s)
            assert set(projections(p, got)) <= full


def test_deadline_raises():
    s = compile(gen_trees(5), deadline=time.monotonic() - 1)
    with pytest.raises(SearchTimeout):
        list(s)


def test_found_are_answer_sets():
    p = gen_trees(4)
    s = compile(p)
    list(s)
    assert len(s.found) == 15 and all(is_answer_set(p, X) for X in s.found)
    assert s.stats.models == 15
