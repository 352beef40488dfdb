"""Shared configuration, result type and failure taxonomy for the solving methods."""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Optional

from ..core.program import Program, Solution, project
from ..distances import DistanceMeasure, Hamming, Mode, set_distance
from ..engine import SearchState

METHODS = ("offline", "reformulate", "iterative", "incremental")
COMPLETE_METHODS = ("offline", "reformulate")


class NotFound(Exception):
    """No solution set was produced."""


class Infeasible(NotFound):
    """A complete search proved that no qualifying set exists."""


class MethodFailure(NotFound):
    """An incomplete method (or a capped enumeration) gave up without a proof."""


class UnsupportedMeasure(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    n: int = 2
    k: int = 0
    mode: Mode = Mode.SIMILAR
    method: str = "offline"
    measure: DistanceMeasure = field(default_factory=Hamming)
    max_enumerated: int = 100_000
    max_set_size: int = 4
    time_budget: Optional[float] = None
    learning: bool = False
    heuristic: str = "lowest"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.k < 0:
            raise ValueError("k must be nonnegative")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    def with_k(self, k: int) -> "SearchConfig":
        return replace(self, k=k)

    def deadline(self) -> Optional[float]:
        return None if self.time_budget is None else time.monotonic() + self.time_budget

    def engine(self, program: Program, pruner=None, deadline=None) -> SearchState:
        return SearchState(program, learning=self.learning, heuristic=self.heuristic,
                           seed=self.seed, pruner=pruner,
                           deadline=deadline if deadline is not None else self.deadline())


@dataclass
class SolutionSet:
    solutions: list[Solution]
    delta: int
    k_star: Optional[int] = None
    method: str = ""
    complete: bool = False
    capped: bool = False

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)


def make_set(solutions, config: SearchConfig, method: str, complete: bool,
             capped: bool = False) -> SolutionSet:
    sols = list(solutions)
    return SolutionSet(sols, set_distance(sols, config.measure, config.mode),
                       method=method, complete=complete, capped=capped)


def satisfies(delta: int, k: int, mode: Mode) -> bool:
    return delta <= k if mode is Mode.SIMILAR else delta >= k


def trivially_infeasible(config: SearchConfig) -> bool:
    """A single solution has distance 0, which is never >= a positive k."""
    return config.n == 1 and config.mode is Mode.DIVERSE and config.k > 0


def enumerate_solutions(program: Program, cap: int, config: Optional[SearchConfig] = None,
                        exclude=()) -> tuple[list[Solution], bool]:
    """Up to ``cap`` distinct projected solutions and whether enumeration was exhaustive."""
    config = config or SearchConfig()
    state = config.engine(program)
    for s in exclude:
        state.block(s.atoms)
    out = []
    while len(out) < cap:
        X = state.next_answer_set()
        if X is None:
            return out, True
        out.append(project(X, program))
    return out, state.next_answer_set() is None
