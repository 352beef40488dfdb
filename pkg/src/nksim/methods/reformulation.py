"""Reformulation: one program whose answer sets encode n solutions at once.

Every atom ``a`` is copied to ``a@1 .. a@n``; atoms fixed by facts are shared.
Per copy pair, unnamed indicator atoms mark the distinguished atoms on which
the copies differ, and cardinality rules over the indicators encode the bound.
"""
from __future__ import annotations

from dataclasses import replace
from itertools import combinations
from typing import Iterable, Optional, Sequence

from ..core.program import (FALSE_ATOM, Literal, Program, Rule, RuleKind, Solution, basic,
                            cardinality, constraint, neg, pos)
from ..distances import Hamming, Mode
from .base import (Infeasible, SearchConfig, SolutionSet, UnsupportedMeasure, make_set,
                   trivially_infeasible)

# pair constraint kinds over the per-pair difference count c
ALL_LE = "all_le"    # every pair: c <= t
ALL_GE = "all_ge"    # every pair: c >= t
SOME_LE = "some_le"  # some pair: c <= t
SOME_GE = "some_ge"  # some pair: c >= t


def shared_atoms(program: Program) -> frozenset[int]:
    return frozenset(r.head[0] for r in program.rules
                     if r.kind is RuleKind.BASIC and not r.body)


def _rename(r: Rule, f) -> Rule:
    lit = lambda l: Literal(f(l.atom), l.polarity)
    card = None if r.card is None else (r.card[0], tuple(lit(l) for l in r.card[1]))
    return replace(r, head=tuple(f(a) for a in r.head), body=tuple(lit(l) for l in r.body),
                   card=card)


class Reformulation:
    """The product program plus the maps needed to read solutions back."""

    def __init__(self, program: Program, n: int, constraints: Sequence[tuple[str, int]] = (),
                 exclude: Optional[Iterable[Solution]] = None):
        self.program = program
        self.n = n
        self.shared = shared_atoms(program)
        self.dist = sorted(program.distinguished_ids())
        atoms: list[Optional[str]] = [None]
        self.maps: list[dict[int, int]] = []
        shared_ids = {}
        for a in sorted(self.shared):
            atoms.append(program.atoms[a])
            shared_ids[a] = len(atoms) - 1
        for i in range(1, n + 1):
            m = {FALSE_ATOM: FALSE_ATOM, **shared_ids}
            for a in program.atom_ids():
                if a in self.shared:
                    continue
                name = program.atoms[a]
                atoms.append(None if name is None else f"{name}@{i}")
                m[a] = len(atoms) - 1
            self.maps.append(m)
        self._atoms = atoms
        rules: list[Rule] = []
        for r in program.rules:
            if r.atoms() <= self.shared | {FALSE_ATOM}:
                rules.append(_rename(r, self.maps[0].__getitem__))
                continue
            for m in self.maps:
                rules.append(_rename(r, m.__getitem__))
        self._rules = rules
        varying = [d for d in self.dist if d not in self.shared]
        self.diffs: dict[tuple[int, int], list[Literal]] = {}
        for i, j in combinations(range(n), 2):
            mi, mj = self.maps[i], self.maps[j]
            lits = []
            for d in varying:
                x = self._aux()
                rules.append(basic(x, pos(mi[d]), neg(mj[d])))
                rules.append(basic(x, pos(mj[d]), neg(mi[d])))
                lits.append(pos(x))
            self.diffs[(i, j)] = lits
            self._require_at_least(lits, 1)
        self._encode(constraints)
        if exclude is not None:
            self._exclude(list(exclude))
        distinguished = frozenset(m[d] for m in self.maps for d in self.dist)
        self.product = Program(tuple(self._atoms), tuple(self._rules), distinguished)

    def _aux(self) -> int:
        self._atoms.append(None)
        return len(self._atoms) - 1

    def _indicator(self, lits, lower: int) -> int:
        """Fresh atom true iff at least ``lower`` of ``lits`` hold."""
        x = self._aux()
        self._rules.append(cardinality(x, max(lower, 0), lits))
        return x

    def _require_at_least(self, lits, lower: int) -> None:
        x = self._indicator(lits, lower)
        self._rules.append(constraint(neg(x)))

    def _encode(self, constraints) -> None:
        pairs = list(combinations(range(self.n), 2))
        for kind, t in constraints:
            if kind == ALL_LE:
                for p in pairs:
                    lits = self.diffs[p]
                    if t < 0:
                        self._rules.append(constraint())
                    elif t + 1 <= len(lits):
                        self._rules.append(cardinality(None, t + 1, lits))
            elif kind == ALL_GE:
                if t > 0:
                    for p in pairs:
                        self._require_at_least(self.diffs[p], t)
            elif kind in (SOME_GE, SOME_LE):
                anyx = self._aux()
                for p in pairs:
                    lits = self.diffs[p]
                    if kind == SOME_GE:
                        x = self._indicator(lits, t)
                        self._rules.append(basic(anyx, pos(x)))
                    elif t >= 0:
                        c = self._indicator(lits, t + 1)
                        self._rules.append(basic(anyx, neg(c)))
                self._rules.append(constraint(neg(anyx)))
            else:
                raise ValueError(f"unknown pair constraint {kind!r}")

    def _exclude(self, S: list[Solution]) -> None:
        """Forbid the copies from jointly reproducing the set S."""
        member_in = []
        for m in self.maps:
            inside = self._aux()
            for s in S:
                neq = self._aux()
                for d in self.dist:
                    lit = neg(m[d]) if d in s.atoms else pos(m[d])
                    self._rules.append(basic(neq, lit))
                self._rules.append(basic(inside, neg(neq)))
            member_in.append(pos(inside))
        self._rules.append(constraint(*member_in))

    def decode(self, X) -> list[Solution]:
        X = frozenset(X)
        dist = self.program.distinguished_ids()
        out = []
        for m in self.maps:
            origin = frozenset(a for a in self.program.atom_ids() if m[a] in X)
            out.append(Solution(origin & dist, origin, self.program))
        return out


def reformulate(program: Program, n: int, k: int, mode: Mode, exclude=None) -> Reformulation:
    kind = ALL_LE if mode is Mode.SIMILAR else ALL_GE
    return Reformulation(program, n, [(kind, k)], exclude)


def solve_reformulation(program: Program, config: SearchConfig) -> SolutionSet:
    if not isinstance(config.measure, Hamming):
        raise UnsupportedMeasure("reformulation supports the Hamming measure only")
    if trivially_infeasible(config):
        raise Infeasible("a single solution has distance 0")
    ref = reformulate(program, config.n, config.k, config.mode)
    return solve_product(ref, config, "reformulate")


def solve_product(ref: Reformulation, config: SearchConfig, method: str) -> SolutionSet:
    state = config.engine(ref.product)
    X = state.next_answer_set()
    if X is None:
        raise Infeasible("the product program has no answer set")
    return make_set(ref.decode(X), config, method, True)
