"""Deterministic generators for ground fixture programs."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .core.formats import serialize
from .core.program import (Program, ProgramBuilder, basic, cardinality, choice, constraint,
                           neg, pos)


@dataclass(frozen=True)
class RandomParams:
    seed: int = 0
    atoms: int = 6
    rules: int = 10
    max_body: int = 3
    neg_fraction: float = 0.5
    constraint_fraction: float = 0.2
    choice_fraction: float = 0.0
    card_fraction: float = 0.0


def gen_random(params: RandomParams = RandomParams()) -> Program:
    """Seeded random normal program; choice and cardinality rules are opt-in."""
    if params.atoms > 12:
        raise ValueError("gen_random is meant for at most 12 atoms")
    rng = random.Random(params.seed)
    b = ProgramBuilder()
    ids = [b.atom(f"a{i}") for i in range(1, params.atoms + 1)]

    def lits(lo: int):
        return [neg(a) if rng.random() < params.neg_fraction else pos(a)
                for a in (rng.choice(ids) for _ in range(rng.randint(lo, params.max_body)))]

    for _ in range(params.rules):
        r = rng.random()
        if r < params.constraint_fraction:
            b.add(constraint(*lits(1)))
        elif r < params.constraint_fraction + params.choice_fraction:
            heads = rng.sample(ids, rng.randint(1, min(3, len(ids))))
            b.add(choice(heads, lits(0)))
        elif r < params.constraint_fraction + params.choice_fraction + params.card_fraction:
            body = lits(1)
            b.add(cardinality(rng.choice(ids), rng.randint(0, len(body)), body))
        else:
            b.add(basic(rng.choice(ids), *lits(0)))
    return b.build()


def gen_subsets(atom_names: Sequence[str]) -> Program:
    if len(atom_names) > 12:
        raise ValueError("at most 12 atoms")
    b = ProgramBuilder()
    b.add(choice([b.atom(a) for a in atom_names]))
    return b.build()


def gen_trees(m_leaves: int) -> Program:
    """Rooted binary trees over leaves 0..m-1 with internal vertices m..2m-2.

    Each internal vertex picks exactly two smaller children; every vertex must
    be reachable from the root 2m-2, and internal vertices with larger ids must
    have larger maximal children, which leaves one answer set per tree.
    """
    if m_leaves < 2:
        raise ValueError("need at least two leaves")
    m = m_leaves
    root = 2 * m - 2
    internal = range(m, root + 1)
    b = ProgramBuilder()
    edge = {(x, y): b.atom(f"edge({x},{y})") for x in internal for y in range(x)}
    reach = {(x, y): b.atom(f"reachable({x},{y})") for x in internal for y in range(x)}
    maxy = {(x, y): b.atom(f"maxY({x},{y})") for x in internal for y in range(1, x)}
    for x in internal:
        b.add(choice([edge[x, y] for y in range(x)], bounds=(2, 2)))
    for (x, y), e in edge.items():
        b.add(basic(reach[x, y], pos(e)))
        for z in range(y + 1, x):
            if z in internal:
                b.add(basic(reach[x, y], pos(edge[x, z]), pos(reach[z, y])))
    for y in range(root):
        b.add(constraint(neg(reach[root, y])))
    for x in internal:
        for y in range(1, x):
            for y1 in range(y):
                b.add(basic(maxy[x, y], pos(edge[x, y]), pos(edge[x, y1])))
    for (x, y), a in maxy.items():
        for (x1, y1), a1 in maxy.items():
            if y > y1 and x < x1:
                b.add(constraint(pos(a), pos(a1)))
    return b.build(distinguished=["edge/2"])


# on(block, location) facts; the location "table" is the table
BW_DEFAULT_INITIAL = {"a": "table", "b": "table", "c": "table"}
BW_DEFAULT_GOAL = {"a": "b"}
BW_STACK_INITIAL = {"a": "b", "b": "c", "c": "table"}
BW_STACK_GOAL = {"c": "b", "b": "a"}


def _bw_setup(blocks, initial, goal):
    names = "abcd"[:blocks]
    if initial is None:
        initial = {x: "table" for x in names} if blocks != 3 else dict(BW_DEFAULT_INITIAL)
    if goal is None:
        goal = {"a": "b"} if blocks != 3 else dict(BW_DEFAULT_GOAL)
    if set(initial) != set(names):
        raise ValueError("initial state must place every block")
    return list(names), dict(initial), dict(goal)


def gen_blocksworld(blocks: int = 3, horizon: int = 3,
                    initial: Optional[dict] = None, goal: Optional[dict] = None) -> Program:
    """Non-concurrent blocks world with plans of at most ``horizon`` moves.

    moveop(B,L,T) moves block B onto location L during step T (1..horizon), so
    on(.,.,T) describes the state after T moves.  Moves of a block onto itself
    are not grounded.  The goal may hold at any time point.
    """
    if blocks > 4 or horizon > 7:
        raise ValueError("blocks <= 4 and horizon <= 7")
    names, initial, goal = _bw_setup(blocks, initial, goal)
    locs = names + ["table"]
    times = range(horizon + 1)
    b = ProgramBuilder()
    on = {(x, l, t): b.atom(f"on({x},{l},{t})") for t in times for x in names for l in locs if l != x}
    non = {(x, l, t): b.atom(f"non({x},{l},{t})") for t in times for x in names for l in locs if l != x}
    sup = {(x, t): b.atom(f"supported({x},{t})") for t in times for x in names}
    move = {(x, l, t): b.atom(f"moveop({x},{l},{t})")
            for t in range(1, horizon + 1) for x in names for l in locs if l != x}
    goal_atom = b.atom("goal")

    for x, l in initial.items():
        b.add(basic(on[x, l, 0]))
    for (x, l, t), m in move.items():
        b.add(choice([m]))
        b.add(basic(on[x, l, t], pos(m)))
        for y in names:
            if y != x:
                b.add(constraint(pos(m), pos(on[y, x, t - 1])))
    for t in times:
        for x in names:
            above = [pos(on[y, x, t]) for y in names if y != x]
            if len(above) >= 2:
                b.add(cardinality(None, 2, above))
            for l in locs:
                if l == x:
                    continue
                for l1 in locs:
                    if l1 != x and l1 != l:
                        b.add(basic(non[x, l1, t], pos(on[x, l, t])))
                b.add(constraint(pos(non[x, l, t]), pos(on[x, l, t])))
                if t > 0:
                    b.add(basic(on[x, l, t], pos(on[x, l, t - 1]), neg(non[x, l, t])))
            b.add(basic(sup[x, t], pos(on[x, "table", t])))
            for y in names:
                if y != x:
                    b.add(basic(sup[x, t], pos(on[x, y, t]), pos(sup[y, t])))
            b.add(constraint(neg(sup[x, t])))
        if t > 0:
            step = [pos(m) for (x, l, s), m in move.items() if s == t]
            b.add(cardinality(None, 2, step))
        b.add(basic(goal_atom, *(pos(on[x, l, t]) for x, l in goal.items())))
    b.add(constraint(neg(goal_atom)))
    return b.build(distinguished=["moveop/3"])


def simulate_plans(blocks: int = 3, horizon: int = 3, initial: Optional[dict] = None,
                   goal: Optional[dict] = None) -> set[frozenset[str]]:
    """Independent oracle: every move sequence reaching the goal, as moveop atom sets."""
    names, initial, goal = _bw_setup(blocks, initial, goal)
    locs = names + ["table"]
    actions = [None] + [(x, l) for x in names for l in locs if l != x]

    def clear(state, x):
        return all(state[y] != x for y in state)

    out = set()
    for seq in product(actions, repeat=horizon):
        state = dict(initial)
        reached = all(state[x] == l for x, l in goal.items())
        ok = True
        for a in seq:
            if a is not None:
                x, l = a
                if not clear(state, x) or (l != "table" and l != state[x] and not clear(state, l)):
                    ok = False
                    break
                state[x] = l
            reached |= all(state[x] == l for x, l in goal.items())
        if ok and reached:
            out.add(frozenset(f"moveop({a[0]},{a[1]},{t})"
                              for t, a in enumerate(seq, 1) if a is not None))
    return out


def adversarial_iterative() -> Program:
    """{a}. b :- a. {c} :- a.  Greedy search meets {} first and gets stuck at k=1."""
    b = ProgramBuilder()
    a, bb, c = b.atom("a"), b.atom("b"), b.atom("c")
    b.add(choice([a]))
    b.add(basic(bb, pos(a)))
    b.add(choice([c], [pos(a)]))
    return b.build()


def fixture_programs() -> dict[str, Program]:
    out = {
        "subsets3": gen_subsets(["a", "b", "c"]),
        "trees3": gen_trees(3),
        "trees4": gen_trees(4),
        "blocks3": gen_blocksworld(3, 3),
        "blocks3_stack": gen_blocksworld(3, 3, BW_STACK_INITIAL, BW_STACK_GOAL),
        "adversarial": adversarial_iterative(),
    }
    for seed in (5, 6, 7):
        out[f"random{seed}"] = gen_random(RandomParams(seed=seed, constraint_fraction=0.1,
                                                       choice_fraction=0.3))
    return out


def write_fixtures(directory: str | Path, programs: Optional[dict[str, Program]] = None) -> list[Path]:
    """Write every fixture program in both formats under ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, prog in (programs or fixture_programs()).items():
        for fmt, ext in (("dsl", "lp"), ("smodels", "sm")):
            path = directory / f"{name}.{ext}"
            path.write_bytes(serialize(prog, fmt))
            written.append(path)
    return written


def names_of_all(program: Program, sets: Iterable[frozenset[int]]) -> set[frozenset[str]]:
    ids = program.distinguished_ids()
    return {program.names(X & ids) for X in sets}
