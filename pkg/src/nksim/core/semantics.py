"""Reference answer-set semantics.

This is the verification oracle: choice rules are read as ``h :- body, not not h``,
cardinality bodies are expanded into one rule per l-subset when small, the reduct
is taken literally and answer sets are found by exhaustive subset enumeration.
Nothing here is shared with the search engine.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .program import (FALSE_ATOM, Literal, Polarity, Program, Rule, RuleKind,
                      basic, cardinality, constraint, pos)

# cardinality bodies with more literals than this are evaluated by counting
EXPANSION_LIMIT = 12


class ConstraintViolated(Exception):
    """A constraint body holds in the least model."""

    def __init__(self, rule: Rule):
        super().__init__(f"constraint violated: {rule}")
        self.rule = rule


class AtomCapExceeded(ValueError):
    pass


def holds(lit: Literal, X: frozenset[int] | set[int]) -> bool:
    if lit.polarity is Polarity.NEG:
        return lit.atom not in X
    return lit.atom in X


def count_holds(lits, X) -> int:
    return sum(1 for l in lits if holds(l, X))


def _expanded(program: Program):
    """Yield ``(rule, extra)`` pairs of the nested normal program.

    ``extra`` is an optional side condition evaluated on X rather than turned
    into syntax: a bounded choice contributes constraints whose body is
    ``body, not (l <= {H})`` or ``body, not ({H} <= u)``.
    """
    for r in program.rules:
        if r.kind is RuleKind.CHOICE:
            for h in r.head:
                yield basic(h, *r.body, Literal(h, Polarity.NOTNOT)), None
            if r.bounds is not None:
                lo, hi = r.bounds
                if lo > 0:
                    yield constraint(*r.body), ("below", lo, r.head)
                if hi < len(r.head):
                    yield constraint(*r.body), ("above", hi, r.head)
        elif r.kind is RuleKind.CARDINALITY:
            lower, lits = r.card
            if len(lits) <= EXPANSION_LIMIT:
                for subset in combinations(lits, lower):
                    yield (basic(r.head[0], *subset) if r.head else constraint(*subset)), None
            else:
                yield r, None
        else:
            yield r, None


def _side_condition_holds(extra, X) -> bool:
    """Truth of ``not (l <= {H})`` / ``not ({H} <= u)`` in X."""
    kind, bound, heads = extra
    c = sum(1 for h in heads if h in X)
    return c < bound if kind == "below" else c > bound


def reduct(program: Program, X: Iterable[int]) -> Program:
    """The negation-free program obtained by evaluating every ``not F`` against X.

    A subformula reduced to bottom is written as the reserved false atom 0 in the
    body, so ``p :- not p`` w.r.t. {p} becomes ``p :- atom0``.
    """
    X = frozenset(X)
    rules = []
    for r, extra in _expanded(program):
        if r.kind is RuleKind.CARDINALITY:
            lower, lits = r.card
            sat_neg = sum(1 for l in lits if l.polarity is Polarity.NEG and l.atom not in X)
            posl = tuple(l for l in lits if l.polarity is Polarity.POS)
            h = r.head[0] if r.head else None
            rules.append(cardinality(h, max(0, lower - sat_neg), posl))
            continue
        body = []
        false = False
        for l in r.body:
            if l.polarity is Polarity.POS:
                body.append(l)
            elif l.polarity is Polarity.NEG:
                false |= l.atom in X
            else:  # not not A reduces to top iff A in X
                false |= l.atom not in X
        if extra is not None:
            false |= not _side_condition_holds(extra, X)
        if false:
            body.append(pos(FALSE_ATOM))
        if r.head:
            rules.append(basic(r.head[0], *body))
        else:
            rules.append(constraint(*body))
    return Program(program.atoms, tuple(rules), program.distinguished)


def _is_positive(program: Program) -> bool:
    for r in program.rules:
        if r.kind is RuleKind.CHOICE:
            return False
        lits = r.body if r.card is None else r.card[1]
        if any(l.polarity is not Polarity.POS for l in lits):
            return False
    return True


def _naive_fixpoint(program: Program) -> tuple[frozenset[int], int]:
    """Least model by naive rounds; returns the model and the number of rounds."""
    model: set[int] = set()
    rounds = 0
    while True:
        rounds += 1
        new = set(model)
        for r in program.rules:
            if not r.head:
                continue
            if r.card is not None:
                lower, lits = r.card
                if sum(1 for l in lits if l.atom in model) >= lower:
                    new.add(r.head[0])
            elif all(l.atom in model for l in r.body):
                new.add(r.head[0])
        new.discard(FALSE_ATOM)
        if new == model:
            return frozenset(model), rounds
        model = new


def least_model(positive: Program) -> frozenset[int]:
    """The subset-minimal model; raises ConstraintViolated if a constraint fires."""
    if not _is_positive(positive):
        raise ValueError("least_model needs a negation-free program")
    model, _ = _naive_fixpoint(positive)
    for r in positive.rules:
        if r.head:
            continue
        if r.card is not None:
            if sum(1 for l in r.card[1] if l.atom in model) >= r.card[0]:
                raise ConstraintViolated(r)
        elif all(l.atom in model for l in r.body):
            raise ConstraintViolated(r)
    return model


def is_answer_set(program: Program, X: Iterable[int]) -> bool:
    X = frozenset(X)
    if FALSE_ATOM in X:
        return False
    try:
        return least_model(reduct(program, X)) == X
    except ConstraintViolated:
        return False


class _Compiled:
    """Bit-mask view of the expanded program for fast repeated stability tests.

    Each rule is (head_bit, pos_mask, neg_mask, nn_mask, side) or a counting rule.
    """

    def __init__(self, program: Program):
        self.n = program.size
        self.basic = []
        self.count = []
        self.constraints = []
        for r, extra in _expanded(program):
            if r.kind is RuleKind.CARDINALITY:
                lower, lits = r.card
                pm = [1 << l.atom for l in lits if l.polarity is Polarity.POS]
                nm = [1 << l.atom for l in lits if l.polarity is Polarity.NEG]
                item = (1 << r.head[0] if r.head else 0, lower, pm, nm)
                (self.count.append(item) if r.head else self.constraints.append(("count", item)))
                continue
            p = n = nn = 0
            for l in r.body:
                bit = 1 << l.atom
                if l.polarity is Polarity.POS:
                    p |= bit
                elif l.polarity is Polarity.NEG:
                    n |= bit
                else:
                    nn |= bit
            item = (1 << r.head[0] if r.head else 0, p, n, nn, extra)
            if r.head:
                self.basic.append(item)
            else:
                self.constraints.append(("basic", item))

    def stable(self, mask: int) -> bool:
        X = None
        for kind, item in self.constraints:
            if kind == "count":
                _, lower, pm, nm = item
                c = sum(1 for b in pm if mask & b) + sum(1 for b in nm if not mask & b)
                if c >= lower:
                    return False
            else:
                _, p, n, nn, extra = item
                if p & ~mask or n & mask or nn & ~mask:
                    continue
                if extra is not None:
                    if X is None:
                        X = {i for i in range(1, self.n + 1) if mask >> i & 1}
                    if not _side_condition_holds(extra, X):
                        continue
                return False
        rules = [(h, p) for h, p, n, nn, _ in self.basic
                 if not (n & mask) and not (nn & ~mask) and not p & 1]
        counts = []
        for h, lower, pm, nm in self.count:
            need = lower - sum(1 for b in nm if not mask & b)
            counts.append((h, need, pm))
        model = 0
        changed = True
        while changed:
            changed = False
            for h, p in rules:
                if not model & h and p & ~model == 0:
                    model |= h
                    changed = True
            for h, need, pm in counts:
                if not model & h and sum(1 for b in pm if model & b) >= need:
                    model |= h
                    changed = True
            if model & ~mask:
                return False
        return model == mask


def enumerate_bruteforce(program: Program, atom_cap: int = 20) -> set[frozenset[int]]:
    """All answer sets, by testing every subset of the atom table."""
    n = program.size
    if n > atom_cap:
        raise AtomCapExceeded(f"{n} atoms exceed the cap of {atom_cap}")
    comp = _Compiled(program)
    out = set()
    for bits in range(1 << n):
        mask = bits << 1
        if comp.stable(mask):
            out.add(frozenset(i for i in range(1, n + 1) if mask >> i & 1))
    return out
