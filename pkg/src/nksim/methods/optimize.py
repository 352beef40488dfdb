from __future__ import annotations

from typing import Callable, Optional

from ..core.program import Program
from ..distances import Mode
from .base import COMPLETE_METHODS, Infeasible, MethodFailure, NotFound, SearchConfig, SolutionSet


def solve(program: Program, config: SearchConfig) -> SolutionSet:
    from . import SOLVERS
    return SOLVERS[config.method](program, config)


def binary_search(feasible: Callable[[int], Optional[object]], lo: int, hi: int,
                  mode: Mode, value: Callable[[object], int]):
    """Best k in [lo, hi] with a witness: least for similar, greatest for diverse.

    ``feasible(k)`` returns a witness or None; ``value(w)`` is the witness's own
    distance, which tightens the interval past the probed k.
    """
    if lo > hi:
        raise ValueError("lo must not exceed hi")
    if mode is Mode.SIMILAR:
        best = feasible(hi)
        if best is None:
            return None, None
        hi = min(hi, value(best))
        while lo < hi:
            mid = (lo + hi) // 2
            w = feasible(mid)
            if w is None:
                lo = mid + 1
            else:
                best, hi = w, min(mid, value(w))
        return best, hi
    best = feasible(lo)
    if best is None:
        return None, None
    lo = max(lo, value(best))
    while lo < hi:
        mid = (lo + hi + 1) // 2
        w = feasible(mid)
        if w is None:
            hi = mid - 1
        else:
            best, lo = w, max(mid, value(w))
    return best, lo


def optimize_most(program: Program, config: SearchConfig, lo: int = 0,
                  hi: Optional[int] = None) -> SolutionSet:
    """n most similar (least k) or most diverse (greatest k) solutions."""
    if hi is None:
        hi = config.measure.max_distance(program)
    hi = max(hi, lo)
    if config.n == 1:
        res = solve(program, config.with_k(0))
        res.k_star = 0
        return res

    def feasible(k):
        try:
            return solve(program, config.with_k(k))
        except NotFound:
            return None

    best, k_star = binary_search(feasible, lo, hi, config.mode, lambda s: s.delta)
    if best is None:
        if config.method in COMPLETE_METHODS:
            raise Infeasible(f"no set of {config.n} solutions for any k in [{lo}, {hi}]")
        raise MethodFailure(f"{config.method} found no set for any k in [{lo}, {hi}]")
    best.k_star = k_star
    best.complete = best.complete and config.method in COMPLETE_METHODS
    return best
