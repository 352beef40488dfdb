"""Plans decoded from ``moveop(block, location, step)`` atoms and their Hamming distance."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..core.program import Program, parse_atom_name
from ..engine import PartialSolution
from .base import DecodeError, DistanceMeasure, names_of

Action = tuple[str, ...]


@dataclass(frozen=True)
class Plan:
    """``act[i-1]`` is the action at step i; None marks an idle step inside the plan."""

    act: tuple[Optional[Action], ...] = ()

    @property
    def length(self) -> int:
        return len(self.act)

    def at(self, i: int) -> Optional[Action]:
        return self.act[i - 1] if 1 <= i <= len(self.act) else None


@dataclass(frozen=True)
class PartialPlan:
    act: dict[int, Action] = field(default_factory=dict)
    horizon: Optional[int] = None
    consistent: bool = True


def _steps(atoms: Iterable[str], action_predicate: str) -> tuple[dict[int, Action], bool]:
    act: dict[int, Action] = {}
    ok = True
    for name in atoms:
        pred, args = parse_atom_name(name)
        if pred != action_predicate or not args:
            continue
        try:
            t = int(args[-1])
        except ValueError:
            raise DecodeError(f"step of {name} is not an integer") from None
        a = tuple(args[:-1])
        if t in act and act[t] != a:
            ok = False
        act[t] = a
    return act, ok


def decode_plan(atoms, action_predicate: str = "moveop", horizon: Optional[int] = None,
                partial: bool = False):
    act, ok = _steps(names_of(atoms), action_predicate)
    if partial:
        return PartialPlan(act, horizon, ok)
    if not ok:
        raise DecodeError("two actions at one step")
    if any(t < 1 for t in act):
        raise DecodeError("steps start at 1")
    if horizon is not None and any(t > horizon for t in act):
        raise DecodeError("action beyond the horizon")
    length = max(act, default=0)
    return Plan(tuple(act.get(i) for i in range(1, length + 1)))


def plan_distance(p1: Plan, p2: Plan) -> int:
    if p1.length > p2.length:
        p1, p2 = p2, p1
    diff = sum(1 for i in range(1, p1.length + 1) if p1.at(i) != p2.at(i))
    return diff + p2.length - p1.length


def plan_lower_bound(pp: PartialPlan, pc: Plan, horizon: int) -> int:
    n = pc.length
    return (sum(1 for i, a in pp.act.items() if i <= n and a != pc.at(i))
            + sum(1 for i in pp.act if n < i <= horizon))


def plan_upper_bound(pp: PartialPlan, pc: Plan, horizon: int) -> int:
    n = pc.length
    return horizon - sum(1 for i, a in pp.act.items() if i <= n and a == pc.at(i))


class PlanHamming(DistanceMeasure):
    name = "plan"

    def __init__(self, horizon: int, action_predicate: str = "moveop"):
        self.horizon = horizon
        self.action_predicate = action_predicate

    def decode(self, s, partial: bool = False):
        return decode_plan(s, self.action_predicate, self.horizon, partial)

    def pair(self, s1, s2) -> int:
        return plan_distance(self.total(s1), self.total(s2))

    def bounds(self, partial: PartialSolution, s) -> tuple[int, int]:
        pc = self.total(s)
        pp = self.decode(partial.true, partial=True)
        if not pp.consistent:
            return 0, self.horizon
        return plan_lower_bound(pp, pc, self.horizon), plan_upper_bound(pp, pc, self.horizon)

    def max_distance(self, program: Program) -> int:
        return self.horizon
