import random
from itertools import combinations

import pytest

from nksim.core import ProgramBuilder, Solution, basic, choice, parse, pos, project
from nksim.distances import Hamming, Mode, Nodal, set_distance
from nksim.methods import (Infeasible, MethodFailure, NotFound, SearchConfig, UnsupportedMeasure,
                           find_clique, optimize_most, solve_closest, solve_incremental,
                           solve_iterative, solve_k_close, solve_k_close_set, solve_maximal,
                           solve_offline, solve_reformulation)
from nksim.methods.reformulation import reformulate
from nksim.testkit import (RandomParams, adversarial_iterative, gen_random, gen_subsets,
                           gen_trees)

from oracle import oracle_feasible, oracle_solutions, soundness_errors

SIM, DIV = Mode.SIMILAR, Mode.DIVERSE
SUBSETS = gen_subsets(["a", "b", "c"])


def names(res):
    return sorted(sorted(s.names) for s in res.solutions)


def sol(program, *atoms):
    return project({program.lookup(a) for a in atoms}, program)


# -- clique -----------------------------------------------------------------------

def test_clique_triangle_and_path():
    assert sorted(find_clique(3, {(0, 1), (1, 2), (0, 2)}, 3)) == [0, 1, 2]
    assert find_clique(3, {(0, 1), (1, 2)}, 3) is None
    assert find_clique(0, set(), 0) == []


def test_clique_random_graphs_match_scan():
    rng = random.Random(0)
    for _ in range(200):
        edges = {(i, j) for i, j in combinations(range(6), 2) if rng.random() < 0.5}
        for n in (2, 3, 4):
            got = find_clique(6, edges, n)
            exists = any(all((a, b) in edges for a, b in combinations(c, 2))
                         for c in combinations(range(6), n))
            assert (got is not None) == exists
            if got is not None:
                assert len(set(got)) == n
                assert all((min(a, b), max(a, b)) in edges for a, b in combinations(got, 2))


# -- offline / reformulation ----------------------------------------------------------

def test_offline_subset_examples():
    res = solve_offline(SUBSETS, SearchConfig(n=2, k=1))
    assert res.delta <= 1 and res.complete
    res = solve_offline(SUBSETS, SearchConfig(n=2, k=3, mode=DIV))
    assert names(res) == [[], ["a", "b", "c"]]
    res = solve_offline(SUBSETS, SearchConfig(n=1, k=0))
    assert len(res) == 1 and res.delta == 0


def test_offline_reports_cap():
    res = solve_offline(SUBSETS, SearchConfig(n=2, k=3, max_enumerated=3))
    assert res.capped and not res.complete
    with pytest.raises(MethodFailure):
        solve_offline(SUBSETS, SearchConfig(n=2, k=3, mode=DIV, max_enumerated=3))
    with pytest.raises(Infeasible):
        solve_offline(SUBSETS, SearchConfig(n=9, k=3))


def test_reformulation_single_choice():
    p = parse("{p}.")
    res = solve_reformulation(p, SearchConfig(n=2, k=1, method="reformulate"))
    assert names(res) == [[], ["p"]] and res.delta == 1
    with pytest.raises(Infeasible):
        solve_reformulation(p, SearchConfig(n=2, k=0, method="reformulate"))
    res = solve_reformulation(p, SearchConfig(n=1, k=0, method="reformulate"))
    assert len(res) == 1


def test_reformulation_copies_and_shared_facts():
    p = parse("f. {p} :- f.")
    ref = reformulate(p, 2, 1, SIM)
    named = {a for a in ref.product.atoms if a}
    assert {"f", "p@1", "p@2"} <= named and "f@1" not in named


def test_reformulation_rejects_other_measures():
    with pytest.raises(UnsupportedMeasure):
        solve_reformulation(gen_trees(3), SearchConfig(measure=Nodal(), method="reformulate"))


def random_instance(seed):
    return gen_random(RandomParams(seed=seed, atoms=3 + seed % 6, rules=4 + seed % 9,
                                   choice_fraction=0.35, constraint_fraction=0.1))


def test_offline_and_reformulation_agree():
    checked = 0
    for seed in range(50):
        p = random_instance(seed)
        sols = oracle_solutions(p)
        for n, k, mode in [(2, 1, SIM), (2, 2, DIV), (3, 2, SIM), (3, 1, DIV), (2, 0, SIM)]:
            verdicts = []
            for solver, method in ((solve_offline, "offline"), (solve_reformulation, "reformulate")):
                try:
                    res = solver(p, SearchConfig(n=n, k=k, mode=mode, method=method))
                    assert not soundness_errors(res, sols, n, k, Hamming(), mode)
                    verdicts.append(True)
                except Infeasible:
                    verdicts.append(False)
            assert verdicts[0] == verdicts[1] == oracle_feasible(sols, n, k, Hamming(), mode)
            checked += 1
    assert checked == 250


# -- online methods ---------------------------------------------------------------------

def test_iterative_examples():
    res = solve_iterative(SUBSETS, SearchConfig(n=3, k=2, method="iterative"))
    assert res.delta <= 2 and len(res) == 3
    res = solve_iterative(SUBSETS, SearchConfig(n=1, k=0, method="iterative"))
    assert len(res) == 1 and res.delta == 0


def test_adversarial_fixture():
    p = adversarial_iterative()
    cfg = dict(n=2, k=1, mode=SIM)
    with pytest.raises(MethodFailure):
        solve_iterative(p, SearchConfig(method="iterative", **cfg))
    res = solve_offline(p, SearchConfig(**cfg))
    assert res.delta <= 1 and len(res) == 2


def test_incremental_trees():
    p = gen_trees(4)
    sols = oracle_solutions(p, bruteforce=False)
    for k in range(3, 8):
        cfg = SearchConfig(n=2, k=k, measure=Nodal(), method="incremental")
        res = solve_incremental(p, cfg)
        assert not soundness_errors(res, sols, 2, k, Nodal(), SIM)
        assert oracle_feasible(sols, 2, k, Nodal(), SIM)


def test_incremental_vacuous_bound_takes_first_two():
    p = SUBSETS
    res = solve_incremental(p, SearchConfig(n=2, k=3, method="incremental"))
    first = solve_offline(p, SearchConfig(n=8, k=3)).solutions[:2]
    assert res.solutions == first


def test_incremental_diverse_beyond_max():
    with pytest.raises(MethodFailure):
        solve_incremental(SUBSETS, SearchConfig(n=2, k=4, mode=DIV, method="incremental"))


def test_incremental_infeasible_without_cuts():
    with pytest.raises(Infeasible):
        solve_incremental(SUBSETS, SearchConfig(n=9, k=3, method="incremental"))


def test_single_diverse_solution_infeasible():
    for solver in (solve_iterative, solve_incremental, solve_reformulation):
        with pytest.raises(Infeasible):
            solver(SUBSETS, SearchConfig(n=1, k=1, mode=DIV))


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(n=0)
    with pytest.raises(ValueError):
        SearchConfig(method="magic")


# -- optimization and variants -------------------------------------------------------------

def test_optimize_trees_offline():
    p = gen_trees(4)
    sols = oracle_solutions(p, bruteforce=False)
    ds = [Nodal().pair(a, b) for a, b in combinations(sols, 2)]
    assert len(ds) == 105
    lo = optimize_most(p, SearchConfig(n=2, measure=Nodal()))
    hi = optimize_most(p, SearchConfig(n=2, mode=DIV, measure=Nodal()))
    assert (lo.k_star, hi.k_star) == (min(ds), max(ds))
    assert lo.delta == lo.k_star and hi.delta == hi.k_star


def test_optimize_examples():
    assert optimize_most(SUBSETS, SearchConfig(n=1)).k_star == 0
    res = optimize_most(SUBSETS, SearchConfig(n=2, mode=DIV))
    assert res.k_star == 3 and names(res) == [[], ["a", "b", "c"]]
    res = optimize_most(SUBSETS, SearchConfig(n=2, mode=DIV, method="reformulate"))
    assert res.k_star == 3
    with pytest.raises(Infeasible):
        optimize_most(SUBSETS, SearchConfig(n=9))


def test_maximal_examples():
    res = solve_maximal(SUBSETS, Hamming(), 1, SIM, 8)
    assert set_distance(res.solutions, Hamming(), SIM) <= 1 and len(res) >= 2
    assert len(solve_maximal(parse(":- not p."), Hamming(), 1, SIM, 8)) == 0
    res = solve_maximal(SUBSETS, Hamming(), 3, SIM, 8)
    assert len(res) == 8
    assert solve_maximal(SUBSETS, Hamming(), 3, SIM, 9).complete
    assert len(solve_maximal(SUBSETS, Hamming(), 3, SIM, 5)) == 5


def test_k_close_examples():
    S = [sol(SUBSETS, "a")]
    s = solve_k_close(SUBSETS, Hamming(), S, 1, SIM)
    assert Hamming().pair(s, S[0]) == 1 and s.atoms != S[0].atoms
    s = solve_k_close(SUBSETS, Hamming(), S, 3, SIM)
    assert s.atoms != S[0].atoms
    everything = oracle_solutions(SUBSETS)
    with pytest.raises(Infeasible):
        solve_k_close(SUBSETS, Hamming(), everything, 3, SIM)


def test_closest_examples():
    S = [sol(SUBSETS)]
    s, k = solve_closest(SUBSETS, Hamming(), S, SIM)
    assert k == 1 and len(s.names) == 1
    s, k = solve_closest(SUBSETS, Hamming(), S, DIV)
    assert k == 3 and s.names == {"a", "b", "c"}
    for offline in (False, True):
        with pytest.raises(NotFound):
            solve_closest(SUBSETS, Hamming(), oracle_solutions(SUBSETS), SIM, offline=offline)
    assert solve_closest(SUBSETS, Hamming(), S, DIV, offline=True)[1] == 3


def test_closest_search_matches_offline():
    p = gen_trees(4)
    sols = oracle_solutions(p, bruteforce=False)
    for i in (0, 5):
        for mode in (SIM, DIV):
            a = solve_closest(p, Nodal(), [sols[i]], mode)[1]
            b = solve_closest(p, Nodal(), [sols[i]], mode, offline=True)[1]
            if mode is SIM:
                assert a == b
            else:
                assert a <= b


@pytest.mark.parametrize("measure,target", [(Hamming(), 2), (Nodal(), 4)])
def test_k_close_set_same_distance(measure, target):
    p = SUBSETS if isinstance(measure, Hamming) else gen_trees(4)
    sols = oracle_solutions(p, bruteforce=False)
    S = [s for s in combinations(sols, 2) if measure.pair(*s) == target][0]
    res = solve_k_close_set(p, measure, list(S), 0, SIM, 3)
    assert set_distance(res.solutions, measure, SIM) == target
    assert {s.atoms for s in res.solutions} != {s.atoms for s in S}


def test_k_close_set_singleton_when_loose():
    S = [sol(SUBSETS), sol(SUBSETS, "a", "b")]
    res = solve_k_close_set(SUBSETS, Hamming(), S, 2, SIM, 3)
    assert len(res) == 1


def test_k_close_set_unique_answer_set():
    p = parse("p.")
    with pytest.raises(Infeasible):
        solve_k_close_set(p, Hamming(), [sol(p, "p")], 5, SIM, 3)


def test_k_close_set_diverse():
    S = [sol(SUBSETS), sol(SUBSETS, "a")]
    res = solve_k_close_set(SUBSETS, Hamming(), S, 2, DIV, 3)
    assert abs(set_distance(res.solutions, Hamming(), DIV) - 1) >= 2
