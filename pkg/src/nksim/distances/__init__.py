"""Distance measures between solutions, their partial-solution bounds, and set aggregation."""
from .base import (INF, DecodeError, DistanceMeasure, DistancePruner, Mode, Verdict,
                   compatible, names_of, prune_value, set_distance)
from .hamming import Hamming
from .phylogeny import (Descendant, Nodal, PartialPhylogeny, Phylogeny, decode_phylogeny,
                        naive_nd)
from .plan import PartialPlan, Plan, PlanHamming, decode_plan, plan_distance
from ..engine import PartialSolution


def make_measure(name: str, *, weights=None, cutoff: int = 3, edge_predicate: str = "edge",
                 action_predicate: str = "moveop", horizon=None) -> DistanceMeasure:
    if name == "hamming":
        return Hamming()
    if name == "nodal":
        return Nodal(edge_predicate)
    if name == "descendant":
        return Descendant(weights, cutoff, edge_predicate)
    if name == "plan":
        if horizon is None:
            raise ValueError("the plan measure needs a horizon")
        return PlanHamming(horizon, action_predicate)
    raise ValueError(f"unknown distance measure {name!r}")
