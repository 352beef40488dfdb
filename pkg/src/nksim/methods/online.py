"""The two search-time methods: repeated runs and a single growing session."""
from __future__ import annotations

from ..core.program import Program
from ..distances import DistancePruner
from .base import Infeasible, MethodFailure, SearchConfig, SolutionSet, make_set, trivially_infeasible


def solve_iterative(program: Program, config: SearchConfig) -> SolutionSet:
    """Run i looks for one solution within the bound of the i-1 already found."""
    if trivially_infeasible(config):
        raise Infeasible("a single solution has distance 0")
    found = []
    deadline = config.deadline()
    for i in range(config.n):
        pruner = DistancePruner(config.measure, config.mode, config.k, found, grow=False)
        state = config.engine(program, pruner, deadline)
        for s in found:
            state.block(s.atoms)
        X = state.next_answer_set()
        if X is None:
            if i == 0:
                raise Infeasible("the program has no answer set")
            raise MethodFailure(f"run {i + 1} found no compatible solution")
        found.append(state.solutions[-1])
    return make_set(found, config, "iterative", False)


def incremental_session(program: Program, config: SearchConfig, limit: int, reference=()):
    """One search whose pruning reference grows with every accepted solution."""
    pruner = DistancePruner(config.measure, config.mode, config.k, reference, grow=True)
    state = config.engine(program, pruner)
    for s in reference:
        state.block(s.atoms)
    while len(state.solutions) < limit and state.next_answer_set() is not None:
        pass
    return state


def solve_incremental(program: Program, config: SearchConfig) -> SolutionSet:
    if trivially_infeasible(config):
        raise Infeasible("a single solution has distance 0")
    state = incremental_session(program, config, config.n)
    if len(state.solutions) == config.n:
        return make_set(state.solutions, config, "incremental", False)
    if state.stats.pruned == 0 and state.stats.rejected == 0:
        # nothing was cut off, so every answer set was seen
        raise Infeasible(f"only {len(state.solutions)} solutions exist")
    raise MethodFailure(f"search exhausted after {len(state.solutions)} solutions")
