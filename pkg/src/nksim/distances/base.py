"""Distance-measure contract, set aggregation and the pruning rule."""
from __future__ import annotations

import enum
import math
from abc import ABC, abstractmethod
from itertools import combinations
from typing import Iterable, Sequence

from ..core.program import Program, Solution
from ..engine import PartialSolution

INF = math.inf


class Mode(enum.Enum):
    SIMILAR = "similar"
    DIVERSE = "diverse"


class Verdict(enum.Enum):
    KEEP = "keep"
    PRUNE = "prune"


class DecodeError(ValueError):
    """A solution's atoms do not describe a valid domain object."""


def names_of(s) -> frozenset[str]:
    """Atom names of a Solution, or the set itself if already names."""
    if isinstance(s, Solution):
        return s.names
    return frozenset(s)


class DistanceMeasure(ABC):
    """Pairwise distance over solutions plus admissible bounds for partial ones."""

    name = "abstract"

    def total(self, s):
        """Decode a complete solution, memoised per atom set."""
        cache = self.__dict__.setdefault("_decoded", {})
        key = names_of(s)
        obj = cache.get(key)
        if obj is None:
            obj = cache[key] = self.decode(key)
        return obj

    @abstractmethod
    def decode(self, s, partial: bool = False):
        ...

    @abstractmethod
    def pair(self, s1, s2) -> int:
        ...

    @abstractmethod
    def bounds(self, partial: PartialSolution, s) -> tuple[int, float]:
        ...

    @abstractmethod
    def max_distance(self, program: Program) -> int:
        """A valid upper bound on pair() over the program's solutions."""


def set_distance(S: Sequence, measure: DistanceMeasure, mode: Mode) -> int:
    if len(S) <= 1:
        return 0
    ds = [measure.pair(a, b) for a, b in combinations(S, 2)]
    return max(ds) if mode is Mode.SIMILAR else min(ds)


def prune_value(partial: PartialSolution, X: Iterable, measure: DistanceMeasure,
                mode: Mode, k: int) -> Verdict:
    """Prune when no completion of partial can stay within k of every s in X."""
    X = list(X)
    if not X:
        return Verdict.KEEP
    if mode is Mode.SIMILAR:
        worst = max(measure.bounds(partial, s)[0] for s in X)
        return Verdict.PRUNE if worst > k else Verdict.KEEP
    worst = min(measure.bounds(partial, s)[1] for s in X)
    return Verdict.PRUNE if worst < k else Verdict.KEEP


def compatible(s, X: Iterable, measure: DistanceMeasure, mode: Mode, k: int) -> bool:
    """Exact test that adding s to X keeps every new pair within the k bound."""
    for t in X:
        d = measure.pair(s, t)
        if (d > k) if mode is Mode.SIMILAR else (d < k):
            return False
    return True


class DistancePruner:
    """Engine hook: bounds checks against a reference set of solutions.

    With ``grow=True`` every accepted solution joins the reference set, which
    is how a single search session accumulates a similar/diverse set.
    """

    def __init__(self, measure: DistanceMeasure, mode: Mode, k: int,
                 reference: Iterable = (), grow: bool = True):
        self.measure = measure
        self.mode = mode
        self.k = k
        self.reference = list(reference)
        self.grow = grow

    def active(self) -> bool:
        return bool(self.reference)

    def prune(self, partial: PartialSolution) -> bool:
        return prune_value(partial, self.reference, self.measure, self.mode, self.k) is Verdict.PRUNE

    def accept(self, sol) -> bool:
        return compatible(sol, self.reference, self.measure, self.mode, self.k)

    def add(self, sol) -> None:
        if self.grow:
            self.reference.append(sol)
