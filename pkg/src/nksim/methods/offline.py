from __future__ import annotations

from itertools import combinations

from ..core.program import Program
from ..distances import Mode
from .base import (Infeasible, MethodFailure, SearchConfig, SolutionSet, enumerate_solutions,
                   make_set, trivially_infeasible)
from .clique import find_clique


def distance_graph(solutions, config: SearchConfig) -> set[tuple[int, int]]:
    edges = set()
    for i, j in combinations(range(len(solutions)), 2):
        d = config.measure.pair(solutions[i], solutions[j])
        if (d <= config.k) if config.mode is Mode.SIMILAR else (d >= config.k):
            edges.add((i, j))
    return edges


def solve_offline(program: Program, config: SearchConfig) -> SolutionSet:
    """Enumerate solutions, link the pairs within the bound, pick an n-clique."""
    sols, exhaustive = enumerate_solutions(program, config.max_enumerated, config)
    return offline_from(sols, exhaustive, config)


def offline_from(sols, exhaustive: bool, config: SearchConfig) -> SolutionSet:
    why = "no qualifying set" if exhaustive else f"enumeration capped at {config.max_enumerated}"
    if trivially_infeasible(config):
        raise Infeasible("a single solution has distance 0")
    clique = find_clique(len(sols), distance_graph(sols, config), config.n)
    if clique is None:
        raise (Infeasible if exhaustive else MethodFailure)(why)
    return make_set([sols[i] for i in clique], config, "offline", exhaustive, not exhaustive)
