from __future__ import annotations

from ..core.program import Program
from ..engine import PartialSolution
from .base import DistanceMeasure, names_of


class Hamming(DistanceMeasure):
    """Size of the symmetric difference of two projections."""

    name = "hamming"

    def decode(self, s, partial: bool = False):
        return names_of(s)

    def pair(self, s1, s2) -> int:
        return len(names_of(s1) ^ names_of(s2))

    def bounds(self, partial: PartialSolution, s) -> tuple[int, int]:
        ref = names_of(s)
        lb = len(partial.true - ref) + len(partial.false & ref)
        return lb, lb + len(partial.free)

    def max_distance(self, program: Program) -> int:
        return len(program.distinguished_ids())
