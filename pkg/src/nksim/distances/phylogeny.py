"""Rooted binary phylogenies decoded from ``edge(parent, child)`` atoms.

Two measures: nodal distance (sum over leaf pairs of path-length differences)
and descendant distance (depth-weighted count of equal-depth vertex pairs whose
leaf sets differ).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

from ..core.program import Program, parse_atom_name
from ..engine import PartialSolution
from .base import INF, DecodeError, DistanceMeasure, names_of


def edges_from(atoms: Iterable[str], edge_predicate: str = "edge") -> list[tuple[str, str]]:
    out = []
    for name in atoms:
        pred, args = parse_atom_name(name)
        if pred == edge_predicate and len(args) == 2:
            out.append((args[0], args[1]))
    return sorted(out)


@dataclass(frozen=True)
class Phylogeny:
    root: str
    children: dict[str, tuple[str, ...]]
    leaves: frozenset[str]
    depth: dict[str, int]
    desc: dict[str, frozenset[str]]

    @property
    def vertices(self) -> frozenset[str]:
        return frozenset(self.depth)

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return frozenset((u, v) for u, cs in self.children.items() for v in cs)

    def postorder(self) -> list[str]:
        out, stack = [], [(self.root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                out.append(v)
                continue
            stack.append((v, True))
            for c in reversed(self.children.get(v, ())):
                stack.append((c, False))
        return out

    def nodal_table(self) -> dict[frozenset[str], int]:
        """Leaf-pair path lengths via the pair's lowest common ancestor.

        Every leaf pair is visited exactly once, at the vertex splitting it,
        so the table costs O(|L|^2) once descendant sets are known.
        """
        table = {}
        for v in self.postorder():
            cs = self.children.get(v, ())
            if len(cs) != 2:
                continue
            dv = self.depth[v]
            left, right = self.desc[cs[0]], self.desc[cs[1]]
            for x in left:
                for y in right:
                    table[frozenset((x, y))] = self.depth[x] + self.depth[y] - 2 * dv
        return table

    def nd(self, x: str, y: str) -> int:
        if x == y:
            return 0
        anc = set()
        v: Optional[str] = x
        parent = {c: u for u, cs in self.children.items() for c in cs}
        while v is not None:
            anc.add(v)
            v = parent.get(v)
        v = y
        while v not in anc:
            v = parent[v]
        return self.depth[x] + self.depth[y] - 2 * self.depth[v]

    def newick(self) -> str:
        def emit(v):
            cs = self.children.get(v, ())
            if not cs:
                return v
            return "(" + ",".join(emit(c) for c in cs) + ")"
        return emit(self.root)


@dataclass(frozen=True)
class PartialPhylogeny:
    """Edges decided so far; ``pairs`` maps connected leaf pairs to path lengths."""

    edges: frozenset[tuple[str, str]]
    leaves: frozenset[str] = frozenset()
    pairs: dict = field(default_factory=dict)
    consistent: bool = True

    @property
    def connected_leaves(self) -> frozenset[str]:
        return frozenset(x for p in self.pairs for x in p)


def _forest_pairs(edges, leaves) -> tuple[dict, bool]:
    """Path lengths between leaves connected by the undirected edge set.

    Returns ``consistent=False`` when the edges already violate the binary
    tree shape (two parents, more than two children, or a cycle).
    """
    parents: dict[str, int] = {}
    kids: dict[str, int] = {}
    adj: dict[str, list[str]] = {}
    for u, v in edges:
        parents[v] = parents.get(v, 0) + 1
        kids[u] = kids.get(u, 0) + 1
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    if any(c > 1 for c in parents.values()) or any(c > 2 for c in kids.values()):
        return {}, False
    nverts = len(adj)
    seen: set[str] = set()
    components = 0
    for v in adj:
        if v not in seen:
            components += 1
            stack = [v]
            seen.add(v)
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
    if len(edges) != nverts - components:
        return {}, False
    pairs = {}
    present = sorted(x for x in leaves if x in adj)
    for i, x in enumerate(present):
        dist = {x: 0}
        q = deque([x])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    q.append(w)
        for y in present[i + 1:]:
            if y in dist:
                pairs[frozenset((x, y))] = dist[y]
    return pairs, True


def decode_phylogeny(atoms, edge_predicate: str = "edge", partial: bool = False,
                     leaves: Optional[Iterable[str]] = None):
    """Phylogeny from edge atoms; PartialPhylogeny when partial or no edges."""
    edges = edges_from(names_of(atoms), edge_predicate)
    if partial or not edges:
        if leaves is None:
            parents = {u for u, _ in edges}
            leaves = {v for _, v in edges if v not in parents}
        leaves = frozenset(leaves)
        pairs, ok = _forest_pairs(edges, leaves)
        return PartialPhylogeny(frozenset(edges), leaves, pairs, ok)
    children: dict[str, list[str]] = {}
    parent: dict[str, str] = {}
    for u, v in edges:
        children.setdefault(u, []).append(v)
        if v in parent:
            raise DecodeError(f"vertex {v} has two parents")
        parent[v] = u
    for u, cs in children.items():
        if len(cs) != 2:
            raise DecodeError(f"vertex {u} has {len(cs)} children")
    vertices = set(children) | set(parent)
    roots = [v for v in vertices if v not in parent]
    if len(roots) != 1:
        raise DecodeError(f"expected one root, found {len(roots)}")
    root = roots[0]
    depth = {root: 0}
    order = [root]
    for v in order:
        for c in children.get(v, ()):
            if c in depth:
                raise DecodeError("edges contain a cycle")
            depth[c] = depth[v] + 1
            order.append(c)
    if len(depth) != len(vertices):
        raise DecodeError("not every vertex is reachable from the root")
    desc: dict[str, frozenset[str]] = {}
    for v in reversed(order):
        cs = children.get(v)
        desc[v] = frozenset((v,)) if not cs else desc[cs[0]] | desc[cs[1]]
    lv = frozenset(v for v in vertices if v not in children)
    return Phylogeny(root, {u: tuple(sorted(cs)) for u, cs in children.items()},
                     lv, depth, desc)


def _tree(measure, s) -> Phylogeny:
    t = measure.total(s)
    if not isinstance(t, Phylogeny):
        raise DecodeError("solution does not contain a complete tree")
    return t


def _leaf_count(program: Program, edge_predicate: str) -> int:
    names = [program.key(a) for a in program.distinguished_ids()]
    edges = edges_from(names, edge_predicate)
    parents = {u for u, _ in edges}
    return len({v for _, v in edges if v not in parents})


class Nodal(DistanceMeasure):
    name = "nodal"

    def __init__(self, edge_predicate: str = "edge"):
        self.edge_predicate = edge_predicate

    def decode(self, s, partial: bool = False, leaves=None):
        return decode_phylogeny(s, self.edge_predicate, partial, leaves)

    def table(self, s) -> dict:
        cache = self.__dict__.setdefault("_tables", {})
        key = names_of(s)
        if key not in cache:
            cache[key] = _tree(self, key).nodal_table()
        return cache[key]

    def pair(self, s1, s2) -> int:
        t1, t2 = _tree(self, s1), _tree(self, s2)
        if t1.leaves != t2.leaves:
            raise DecodeError("phylogenies have different leaf sets")
        a, b = self.table(s1), self.table(s2)
        return sum(abs(a[p] - b[p]) for p in a)

    def bounds(self, partial: PartialSolution, s) -> tuple[int, int]:
        ref = _tree(self, s)
        l = len(ref.leaves)
        pp = self.decode(partial.true, partial=True, leaves=ref.leaves)
        worst = comb(l, 2) * l
        if not pp.consistent:
            return 0, worst
        table = self.table(s)
        lb = sum(abs(table[p] - d) for p, d in pp.pairs.items())
        return lb, lb + (comb(l, 2) - len(pp.pairs)) * l

    def max_distance(self, program: Program) -> int:
        l = _leaf_count(program, self.edge_predicate)
        return l * comb(l, 2)


class Descendant(DistanceMeasure):
    """Weighted count of equal-depth cross-tree vertex pairs with differing leaf sets.

    By default weight(i) = max(cutoff - 1 - i, 0), so cutoff 3 gives (2, 1, 0, ...).
    An explicit weight vector overrides the cutoff; depths past its end weigh 0.
    """

    name = "descendant"

    def __init__(self, weights: Optional[Sequence[int]] = None, cutoff: int = 3,
                 edge_predicate: str = "edge"):
        self.weights = tuple(weights) if weights is not None else None
        self.cutoff = cutoff
        self.edge_predicate = edge_predicate

    def weight(self, i: int) -> int:
        if self.weights is not None:
            return self.weights[i] if i < len(self.weights) else 0
        return max(self.cutoff - 1 - i, 0)

    def decode(self, s, partial: bool = False, leaves=None):
        return decode_phylogeny(s, self.edge_predicate, partial, leaves)

    def per_depth(self, t1: Phylogeny, t2: Phylogeny) -> list[int]:
        top = min(max(t1.depth.values()), max(t2.depth.values()))
        levels1: dict[int, list[str]] = {}
        levels2: dict[int, list[str]] = {}
        for v, d in t1.depth.items():
            levels1.setdefault(d, []).append(v)
        for v, d in t2.depth.items():
            levels2.setdefault(d, []).append(v)
        return [sum(1 for x in levels1[i] for y in levels2[i] if t1.desc[x] != t2.desc[y])
                for i in range(top + 1)]

    def pair(self, s1, s2) -> int:
        t1, t2 = _tree(self, s1), _tree(self, s2)
        return sum(self.weight(i) * c for i, c in enumerate(self.per_depth(t1, t2)))

    def bounds(self, partial: PartialSolution, s) -> tuple[int, float]:
        return 0, INF

    def max_distance(self, program: Program) -> int:
        l = _leaf_count(program, self.edge_predicate)
        return sum(self.weight(i) * min(2 ** i, l) ** 2 for i in range(max(l, 1)))


def naive_nd(t: Phylogeny, x: str, y: str) -> int:
    """Shortest undirected path length by breadth-first search."""
    adj: dict[str, list[str]] = {}
    for u, v in t.edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    dist = {x: 0}
    q = deque([x])
    while q:
        u = q.popleft()
        if u == y:
            return dist[u]
        for w in adj.get(u, ()):
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    raise DecodeError(f"{x} and {y} are not connected")


def all_pairs(leaves) -> list[frozenset[str]]:
    return [frozenset(p) for p in combinations(sorted(leaves), 2)]
