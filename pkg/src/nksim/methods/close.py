"""Extending a given set: maximal sets, one more solution, and replacement sets."""
from __future__ import annotations

from itertools import combinations
from typing import Optional, Sequence

from ..core.program import Program, Solution
from ..distances import DistanceMeasure, DistancePruner, Hamming, Mode, set_distance
from .base import (Infeasible, MethodFailure, SearchConfig, SolutionSet, enumerate_solutions,
                   make_set)
from .online import incremental_session
from .optimize import binary_search
from .reformulation import ALL_GE, ALL_LE, SOME_GE, SOME_LE, Reformulation


def _config(measure, k, mode, config: Optional[SearchConfig]) -> SearchConfig:
    base = config or SearchConfig()
    return SearchConfig(n=1, k=k, mode=mode, method="incremental", measure=measure,
                        max_enumerated=base.max_enumerated, max_set_size=base.max_set_size,
                        time_budget=base.time_budget, learning=base.learning,
                        heuristic=base.heuristic, seed=base.seed)


def solve_maximal(program: Program, measure: DistanceMeasure, k: int, mode: Mode,
                  n_max: int, config: Optional[SearchConfig] = None) -> SolutionSet:
    """Greedily grow a k-similar (k-diverse) set until nothing fits or n_max is reached."""
    cfg = _config(measure, k, mode, config)
    state = incremental_session(program, cfg, n_max)
    res = make_set(state.solutions, cfg, "maximal", False)
    # with no pruning and no rejection every answer set made it in
    res.complete = state.exhausted and state.stats.pruned == 0 and state.stats.rejected == 0
    return res


def _inside_ok(S: Sequence[Solution], measure, k: int, mode: Mode) -> bool:
    if len(S) < 2:
        return True
    d = set_distance(S, measure, mode)
    return d <= k if mode is Mode.SIMILAR else d >= k


def solve_k_close(program: Program, measure: DistanceMeasure, S: Sequence[Solution], k: int,
                  mode: Mode, config: Optional[SearchConfig] = None) -> Solution:
    """A solution s outside S with Δ(S ∪ {s}) within the bound k."""
    if not S:
        raise ValueError("S must be nonempty")
    if not _inside_ok(S, measure, k, mode):
        raise Infeasible("S itself violates the bound")
    cfg = _config(measure, k, mode, config)
    pruner = DistancePruner(measure, mode, k, S, grow=False)
    state = cfg.engine(program, pruner)
    for s in S:
        state.block(s.atoms)
    if state.next_answer_set() is None:
        raise Infeasible("no solution outside S meets the bound")
    return state.solutions[-1]


def solve_closest(program: Program, measure: DistanceMeasure, S: Sequence[Solution],
                  mode: Mode, config: Optional[SearchConfig] = None, offline: bool = False,
                  lo: int = 0, hi: Optional[int] = None) -> tuple[Solution, int]:
    """The solution outside S minimising (maximising) Δ(S ∪ {s}), with that value."""
    if not S:
        raise ValueError("S must be nonempty")
    cfg = _config(measure, 0, mode, config)
    if offline:
        sols, exhaustive = enumerate_solutions(program, cfg.max_enumerated, cfg, exclude=S)
        if not sols:
            raise (Infeasible if exhaustive else MethodFailure)("no solution outside S")
        scored = [(set_distance(list(S) + [s], measure, mode), i) for i, s in enumerate(sols)]
        d, i = min(scored) if mode is Mode.SIMILAR else max(scored, key=lambda x: (x[0], -x[1]))
        return sols[i], d
    if hi is None:
        hi = measure.max_distance(program)
    hi = max(hi, lo)

    def feasible(k):
        try:
            return solve_k_close(program, measure, S, k, mode, config)
        except Infeasible:
            return None

    value = lambda s: set_distance(list(S) + [s], measure, mode)
    best, k_star = binary_search(feasible, lo, hi, mode, value)
    if best is None:
        raise Infeasible("no solution outside S")
    return best, k_star


def _in_range(d: int, target: int, k: int, mode: Mode) -> bool:
    return abs(target - d) <= k if mode is Mode.SIMILAR else abs(target - d) >= k


def solve_k_close_set(program: Program, measure: DistanceMeasure, S: Sequence[Solution], k: int,
                      mode: Mode, m_cap: int, config: Optional[SearchConfig] = None) -> SolutionSet:
    """A set S' != S, |S'| <= m_cap, whose Δ is within k of Δ(S) (similar) or at least k away (diverse).

    Sizes are tried in increasing order.  Hamming uses the reformulated
    product program; other measures search combinations of enumerated solutions.
    """
    cfg = _config(measure, k, mode, config)
    target = set_distance(S, measure, mode)
    S = list(S)
    key = frozenset(s.atoms for s in S)
    if isinstance(measure, Hamming):
        return _k_close_set_product(program, cfg, S, target, k, mode, m_cap)
    sols, exhaustive = enumerate_solutions(program, cfg.max_enumerated, cfg)
    for n in range(1, m_cap + 1):
        for combo in combinations(sols, n):
            if n == len(S) and frozenset(s.atoms for s in combo) == key:
                continue
            if _in_range(set_distance(combo, measure, mode), target, k, mode):
                res = make_set(combo, cfg, "offline", exhaustive, not exhaustive)
                return res
    raise (Infeasible if exhaustive else MethodFailure)(f"no set of size <= {m_cap}")


def _k_close_set_product(program, cfg, S, target, k, mode, m_cap) -> SolutionSet:
    for n in range(1, m_cap + 1):
        exclude = S if n == len(S) else None
        if n == 1:
            if not _in_range(0, target, k, mode):
                continue
            Sx = S if len(S) == 1 else ()
            sols, _ = enumerate_solutions(program, 1, cfg, exclude=Sx)
            if sols:
                return make_set(sols, cfg, "reformulate", True)
            continue
        if mode is Mode.SIMILAR:
            groups = [[(ALL_LE, target + k), (SOME_GE, target - k)]]
        else:
            groups = [[(SOME_LE, target - k)], [(ALL_GE, target + k)]]
        for cons in groups:
            ref = Reformulation(program, n, cons, exclude)
            state = cfg.engine(ref.product)
            X = state.next_answer_set()
            if X is not None:
                return make_set(ref.decode(X), cfg, "reformulate", True)
    raise Infeasible(f"no set of size <= {m_cap}")
