"""DPLL-style answer-set search with a distance-pruning hook.

Variables are the program's atoms (ids as in the Program) followed by one
variable per distinct rule body.  Literals are ints ``2*v`` (v true) and
``2*v + 1`` (v false); a nogood is a tuple of literals that must not all hold.

The main loop follows the usual propagate / resolve-conflict / select cycle.
Total assignments that satisfy the completion are checked for stability with a
reduct computation; unfounded atoms are excluded with loop nogoods.  When a
pruner is installed it is consulted on the current partial assignment before
every propagation, and a bound violation is handled exactly like a conflict.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .core.program import FALSE_ATOM, Polarity, Program, RuleKind, Solution, project

Nogood = tuple[int, ...]

BACKTRACKED = "backtracked"
EXHAUSTED = "exhausted"


class SearchTimeout(RuntimeError):
    pass


def lit_of(var: int, value: bool) -> int:
    return 2 * var + (0 if value else 1)


@dataclass(frozen=True)
class PartialSolution:
    """Distinguished atoms (by name) assigned true, assigned false, and still free."""

    true: frozenset[str] = frozenset()
    false: frozenset[str] = frozenset()
    free: frozenset[str] = frozenset()


@dataclass
class Stats:
    decisions: int = 0
    conflicts: int = 0
    models: int = 0
    pruned: int = 0
    rejected: int = 0
    loop_nogoods: int = 0
    learned: int = 0


@dataclass
class _Rule:
    heads: tuple[int, ...]
    choice: bool
    body: int                 # body variable
    pos: frozenset[int]       # positive (non-double-negated) body atoms
    neg: tuple[int, ...] = ()
    nn: tuple[int, ...] = ()
    card: Optional[tuple[int, tuple]] = None  # (lower, ((atom, positive), ...))


@dataclass
class Stable:
    pass


@dataclass
class Unstable:
    unfounded: frozenset[int]
    loop_nogoods: list[Nogood] = field(default_factory=list)


STABLE = Stable()


class SearchState:
    """Mutable search state over one immutable Program."""

    def __init__(self, program: Program, *, learning: bool = False,
                 heuristic: str = "lowest", seed: int = 0, pruner=None,
                 deadline: Optional[float] = None):
        self.program = program
        self.learning = learning
        self.heuristic = heuristic
        self.pruner = pruner
        self.deadline = deadline
        self.n_atoms = len(program.atoms)
        self.stats = Stats()
        self.found: list[frozenset[int]] = []
        self.solutions: list[Solution] = []

        self.nogoods: list[Nogood] = []
        self.kinds: list[str] = []
        self.cards: list[tuple[int, int, tuple[int, ...]]] = []
        self.rules: list[_Rule] = []
        self._bodies: dict = {}
        self.nvars = self.n_atoms
        self._compile()

        n = self.nvars
        self.value: list[Optional[bool]] = [None] * n
        self.level = [0] * n
        self.reason: list[Optional[Nogood]] = [None] * n
        self.tpos = [0] * n
        self.trail: list[int] = []
        self.level_starts: list[int] = []
        self.decisions: list[tuple[int, bool]] = []  # (literal, flipped)
        self.qhead = 0
        self.occ: list[list[int]] = [[] for _ in range(2 * n)]
        self.card_occ: list[list[int]] = [[] for _ in range(n)]
        for i, ng in enumerate(self.nogoods):
            for l in ng:
                self.occ[l].append(i)
        for ci, (b, _, lits) in enumerate(self.cards):
            for v in {b, *(l >> 1 for l in lits)}:
                self.card_occ[v].append(ci)
        self._fresh: list[int] = list(range(len(self.nogoods)))
        self._fresh_cards: list[int] = list(range(len(self.cards)))
        self._pending: Optional[Nogood] = None
        self.exhausted = False
        self.last_learned: Optional[tuple[Nogood, int]] = None

        self.activity = [0.0] * self.n_atoms
        rng = random.Random(seed)
        order = list(range(1, self.n_atoms))
        rng.shuffle(order)
        self._rank = [0] * self.n_atoms
        for i, a in enumerate(order):
            self._rank[a] = i

        self._dist = sorted(program.distinguished_ids())
        self._dist_names = [program.key(a) for a in self._dist]
        self._assign(lit_of(FALSE_ATOM, False), None)

    # -- compilation ----------------------------------------------------------

    def _new_var(self) -> int:
        self.nvars += 1
        return self.nvars - 1

    def _conj_body(self, lits: tuple[int, ...]) -> int:
        key = ("conj", frozenset(lits))
        b = self._bodies.get(key)
        if b is not None:
            return b
        b = self._new_var()
        self._bodies[key] = b
        lits = tuple(sorted(set(lits)))
        for l in lits:
            self._add_static((2 * b, l ^ 1), "body")
        self._add_static((2 * b + 1, *lits), "body")
        return b

    def _card_body(self, lower: int, lits: tuple[int, ...]) -> int:
        key = ("card", lower, tuple(sorted(lits)))
        b = self._bodies.get(key)
        if b is not None:
            return b
        b = self._new_var()
        self._bodies[key] = b
        self.cards.append((b, lower, tuple(lits)))
        return b

    def _add_static(self, ng: Nogood, kind: str) -> None:
        ng = tuple(dict.fromkeys(ng))
        if any(l ^ 1 in ng for l in ng):
            return
        self.nogoods.append(ng)
        self.kinds.append(kind)

    @staticmethod
    def _lit(l) -> int:
        if l.polarity is Polarity.NEG:
            return 2 * l.atom + 1
        return 2 * l.atom

    def _compile(self) -> None:
        support: dict[int, list[int]] = {a: [] for a in range(1, self.n_atoms)}
        for r in self.program.rules:
            if r.kind is RuleKind.CARDINALITY:
                lower, lits = r.card
                b = self._card_body(lower, tuple(self._lit(l) for l in lits))
                if r.head:
                    h = r.head[0]
                    self._add_static((2 * b, 2 * h + 1), "rule")
                    support[h].append(b)
                    self.rules.append(_Rule(r.head, False, b, frozenset(),
                                            card=(lower, tuple((l.atom, l.positive) for l in lits))))
                else:
                    self._add_static((2 * b,), "constraint")
                continue
            b = self._conj_body(tuple(self._lit(l) for l in r.body))
            posa = frozenset(l.atom for l in r.body if l.polarity is Polarity.POS)
            nega = tuple(l.atom for l in r.body if l.polarity is Polarity.NEG)
            nna = tuple(l.atom for l in r.body if l.polarity is Polarity.NOTNOT)
            if r.kind is RuleKind.CONSTRAINT:
                self._add_static((2 * b,), "constraint")
            elif r.kind is RuleKind.BASIC:
                h = r.head[0]
                self._add_static((2 * b, 2 * h + 1), "rule")
                support[h].append(b)
                self.rules.append(_Rule(r.head, False, b, posa, nega, nna))
            else:
                for h in r.head:
                    support[h].append(b)
                self.rules.append(_Rule(r.head, True, b, posa, nega, nna))
                if r.bounds is not None:
                    lo, hi = r.bounds
                    heads = tuple(2 * h for h in r.head)
                    if lo > 0:
                        c = self._card_body(lo, heads)
                        self._add_static((2 * b, 2 * c + 1), "bound")
                    if hi < len(r.head):
                        c = self._card_body(hi + 1, heads)
                        self._add_static((2 * b, 2 * c), "bound")
        for a, bodies in support.items():
            self._add_static((2 * a, *(2 * b + 1 for b in bodies)), "support")

    def count(self, kind: str) -> int:
        return sum(1 for k in self.kinds if k == kind)

    # -- assignment -----------------------------------------------------------

    def decision_level(self) -> int:
        return len(self.level_starts)

    def is_true(self, lit: int) -> bool:
        v = self.value[lit >> 1]
        return v is not None and v == (not lit & 1)

    def is_false(self, lit: int) -> bool:
        v = self.value[lit >> 1]
        return v is not None and v == bool(lit & 1)

    def _assign(self, lit: int, reason: Optional[Nogood]) -> None:
        v = lit >> 1
        self.value[v] = not lit & 1
        self.level[v] = len(self.level_starts)
        self.reason[v] = reason
        self.tpos[v] = len(self.trail)
        self.trail.append(lit)

    def _backtrack(self, lvl: int) -> None:
        if lvl >= len(self.level_starts):
            return
        start = self.level_starts[lvl]
        for lit in self.trail[start:]:
            v = lit >> 1
            self.value[v] = None
            self.reason[v] = None
        del self.trail[start:]
        del self.level_starts[lvl:]
        del self.decisions[lvl:]
        self.qhead = min(self.qhead, len(self.trail))

    def decide(self, lit: int, flipped: bool = False) -> None:
        self.level_starts.append(len(self.trail))
        self.decisions.append((lit, flipped))
        self._assign(lit, None)

    def add_nogood(self, ng, kind: str = "learned") -> Nogood:
        ng = tuple(dict.fromkeys(ng))
        if any(l ^ 1 in ng for l in ng):
            return ng
        if not ng:
            return ng
        i = len(self.nogoods)
        self.nogoods.append(ng)
        self.kinds.append(kind)
        for l in ng:
            self.occ[l].append(i)
        self._fresh.append(i)
        return ng

    # -- propagation ----------------------------------------------------------

    def _check(self, ng: Nogood) -> Optional[Nogood]:
        """Return ng if violated; assign the implied literal if unit."""
        free = -1
        for l in ng:
            v = self.value[l >> 1]
            if v is None:
                if free >= 0:
                    return None
                free = l
            elif v != (not l & 1):
                return None
        if free < 0:
            return ng
        self._assign(free ^ 1, ng)
        return None

    def _card(self, ci: int) -> Optional[Nogood]:
        b, lower, lits = self.cards[ci]
        tl, fl, ul = [], [], []
        for l in lits:
            v = self.value[l >> 1]
            if v is None:
                ul.append(l)
            elif v == (not l & 1):
                tl.append(l)
            else:
                fl.append(l)
        bv = self.value[b]
        m = len(lits)
        slack = m - lower  # number of false literals tolerated
        if bv is None:
            if len(tl) >= lower:
                self._assign(2 * b, (2 * b + 1, *tl[:lower]))
            elif len(fl) > slack:
                self._assign(2 * b + 1, (2 * b, *(l ^ 1 for l in fl[:slack + 1])))
            return None
        if bv:
            if len(fl) > slack:
                return tuple(dict.fromkeys((2 * b, *(l ^ 1 for l in fl[:slack + 1]))))
            if ul and len(fl) == slack:
                base = (2 * b, *(l ^ 1 for l in fl))
                for l in ul:
                    if self.value[l >> 1] is None:
                        self._assign(l, tuple(dict.fromkeys((*base, l ^ 1))))
                    elif not self.is_true(l):
                        return tuple(dict.fromkeys((*base, l ^ 1)))
            return None
        if len(tl) >= lower:
            return tuple(dict.fromkeys((2 * b + 1, *tl[:lower])))
        if ul and len(tl) == lower - 1:
            base = (2 * b + 1, *tl)
            for l in ul:
                if self.value[l >> 1] is None:
                    self._assign(l ^ 1, tuple(dict.fromkeys((*base, l))))
                elif self.is_true(l):
                    return tuple(dict.fromkeys((*base, l)))
        return None

    def propagate(self) -> Optional[Nogood]:
        """Unit propagation to fixpoint; returns a violated nogood or None."""
        while self._fresh:
            i = self._fresh.pop()
            c = self._check(self.nogoods[i])
            if c is not None:
                return c
        while self._fresh_cards:
            c = self._card(self._fresh_cards.pop())
            if c is not None:
                return c
        trail, occ, nogoods = self.trail, self.occ, self.nogoods
        while self.qhead < len(trail):
            lit = trail[self.qhead]
            self.qhead += 1
            for i in occ[lit]:
                c = self._check(nogoods[i])
                if c is not None:
                    return c
            for ci in self.card_occ[lit >> 1]:
                c = self._card(ci)
                if c is not None:
                    return c
        return None

    # -- decisions ------------------------------------------------------------

    def select(self) -> int:
        """Literal of the next decision (an unassigned atom set false)."""
        self.stats.decisions += 1
        if self.heuristic == "activity":
            best = None
            for a in range(1, self.n_atoms):
                if self.value[a] is None:
                    key = (-self.activity[a], self._rank[a])
                    if best is None or key < best[0]:
                        best = (key, a)
            if best is None:
                raise ValueError("no unassigned atom")
            return lit_of(best[1], False)
        for a in range(1, self.n_atoms):
            if self.value[a] is None:
                return lit_of(a, False)
        raise ValueError("no unassigned atom")

    # -- conflicts ------------------------------------------------------------

    def _analyze(self, violated: Nogood, lvl: int) -> tuple[Nogood, int, int]:
        ng = set(violated)
        while True:
            here = [l for l in ng if self.level[l >> 1] == lvl]
            if len(here) <= 1:
                break
            last = max(here, key=lambda l: self.tpos[l >> 1])
            eps = self.reason[last >> 1]
            ng.discard(last)
            ng.update(l for l in eps if l != last ^ 1)
        uip = here[0]
        bj = max((self.level[l >> 1] for l in ng if l != uip), default=0)
        learned = tuple(sorted(ng, key=lambda l: -self.tpos[l >> 1]))
        return learned, uip, bj

    def resolve_conflict(self, violated: Nogood) -> str:
        while True:
            if self.heuristic == "activity":
                for l in violated:
                    if (l >> 1) < self.n_atoms:
                        self.activity[l >> 1] += 1.0
            lvl = max((self.level[l >> 1] for l in violated), default=0)
            if lvl == 0:
                self.exhausted = True
                return EXHAUSTED
            self._backtrack(lvl)
            if self.learning:
                learned, uip, bj = self._analyze(violated, lvl)
                self.last_learned = (learned, lvl)
                self.stats.learned += 1
                self._backtrack(bj)
                i = len(self.nogoods)
                self.nogoods.append(learned)
                self.kinds.append("learned")
                for l in learned:
                    self.occ[l].append(i)
                self._assign(uip ^ 1, learned)
            else:
                j = lvl
                while j >= 1 and self.decisions[j - 1][1]:
                    j -= 1
                if j == 0:
                    self.exhausted = True
                    return EXHAUSTED
                x = self.decisions[j - 1][0]
                self._backtrack(j - 1)
                self.decide(x ^ 1, flipped=True)
            again = None
            for i in self._fresh:
                ng = self.nogoods[i]
                if all(self.is_true(l) for l in ng):
                    again = ng
                    break
            if again is None:
                return BACKTRACKED
            violated = again

    # -- stability ------------------------------------------------------------

    def _least_model(self, X: frozenset[int]) -> set[int]:
        """Least model of the reduct of the compiled rules w.r.t. X."""
        waiting: dict[int, list] = {}
        model: set[int] = set()
        queue: list[int] = []
        counters = []

        def derive(h):
            if h not in model:
                model.add(h)
                queue.append(h)

        for r in self.rules:
            if r.card is not None:
                lower, lits = r.card
                need = lower - sum(1 for a, p in lits if not p and a not in X)
                posa = [a for a, p in lits if p]
                if need <= 0:
                    derive(r.heads[0])
                    continue
                idx = len(counters)
                counters.append([need, r.heads[0]])
                for a in posa:
                    waiting.setdefault(a, []).append(idx)
                continue
            if any(a in X for a in r.neg) or any(a not in X for a in r.nn):
                continue
            heads = [h for h in r.heads if h in X] if r.choice else list(r.heads)
            if not heads:
                continue
            for h in heads:
                if not r.pos:
                    derive(h)
                    continue
                idx = len(counters)
                counters.append([len(r.pos), h])
                for a in r.pos:
                    waiting.setdefault(a, []).append(idx)
        while queue:
            a = queue.pop()
            for idx in waiting.get(a, ()):
                c = counters[idx]
                c[0] -= 1
                if c[0] == 0:
                    derive(c[1])
        model.discard(FALSE_ATOM)
        return model

    def check_stability(self, X) -> Stable | Unstable:
        X = frozenset(X)
        lm = self._least_model(X)
        U = frozenset(X - lm)
        if not U:
            return STABLE
        entries: list[int] = []
        for r in self.rules:
            if not any(h in U for h in r.heads):
                continue
            if r.card is not None:
                lower, lits = r.card
                if not any(p and a in U for a, p in lits):
                    entries.append(2 * r.body + 1)
                    continue
                for a, p in lits:
                    if p and a in U:
                        continue
                    holds = (a in X) if p else (a not in X)
                    if not holds:
                        entries.append(2 * a + 1 if p else 2 * a)
            elif not (r.pos & U):
                entries.append(2 * r.body + 1)
        entries = list(dict.fromkeys(entries))
        return Unstable(U, [(2 * a, *entries) for a in sorted(U)])

    # -- enumeration ----------------------------------------------------------

    def partial_solution(self) -> PartialSolution:
        t, f, u = [], [], []
        for a, name in zip(self._dist, self._dist_names):
            v = self.value[a]
            (u if v is None else t if v else f).append(name)
        return PartialSolution(frozenset(t), frozenset(f), frozenset(u))

    def _assigned_dist_lits(self) -> Nogood:
        return tuple(lit_of(a, self.value[a]) for a in self._dist if self.value[a] is not None)

    def blocking_nogood(self, X) -> Nogood:
        return tuple(lit_of(a, a in X) for a in self._dist)

    def block(self, X) -> None:
        """Forbid the distinguished projection of X (used to exclude given solutions)."""
        ng = self.blocking_nogood(X)
        if not ng:
            self.exhausted = True
        self.add_nogood(ng, "blocking")

    def _resolve_or_stop(self, conflict: Nogood) -> bool:
        self.stats.conflicts += 1
        if not conflict or self.resolve_conflict(conflict) == EXHAUSTED:
            self.exhausted = True
            return False
        return True

    def next_answer_set(self) -> Optional[frozenset[int]]:
        if self._pending is not None:
            c, self._pending = self._pending, None
            if not self._resolve_or_stop(c):
                return None
        if self.exhausted:
            return None
        ticks = 0
        while True:
            ticks += 1
            if self.deadline is not None and ticks % 64 == 0 and time.monotonic() > self.deadline:
                raise SearchTimeout("time budget exhausted")
            conflict = None
            pr = self.pruner
            if pr is not None and pr.active() and pr.prune(self.partial_solution()):
                self.stats.pruned += 1
                conflict = self.add_nogood(self._assigned_dist_lits(), "distance")
                self._fresh = [i for i in self._fresh if self.nogoods[i] is not conflict]
            else:
                conflict = self.propagate()
            if conflict is not None:
                if not self._resolve_or_stop(conflict):
                    return None
                continue
            free = next((a for a in range(1, self.n_atoms) if self.value[a] is None), None)
            if free is not None:
                self.decide(self.select())
                continue
            X = frozenset(a for a in range(1, self.n_atoms) if self.value[a])
            st = self.check_stability(X)
            if isinstance(st, Unstable):
                self.stats.loop_nogoods += len(st.loop_nogoods)
                for ng in st.loop_nogoods:
                    self.add_nogood(ng, "loop")
                if not self._resolve_or_stop(st.loop_nogoods[0]):
                    return None
                continue
            sol = project(X, self.program)
            if pr is not None and not pr.accept(sol):
                self.stats.rejected += 1
                ng = self.add_nogood(self.blocking_nogood(X), "distance")
                if not self._resolve_or_stop(ng):
                    return None
                continue
            self.stats.models += 1
            self.found.append(X)
            self.solutions.append(sol)
            if pr is not None:
                pr.add(sol)
            ng = self.add_nogood(self.blocking_nogood(X), "blocking")
            self._pending = ng
            return X

    def __iter__(self) -> Iterator[frozenset[int]]:
        while True:
            X = self.next_answer_set()
            if X is None:
                return
            yield X


def compile(program: Program, **kwargs) -> SearchState:
    return SearchState(program, **kwargs)


def enumerate_answer_sets(program: Program, limit: Optional[int] = None, **kwargs) -> list[frozenset[int]]:
    state = SearchState(program, **kwargs)
    out = []
    for X in state:
        out.append(X)
        if limit is not None and len(out) >= limit:
            break
    return out
