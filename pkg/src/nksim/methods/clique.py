from __future__ import annotations

from typing import Iterable, Optional


def find_clique(vertices: int, edges: Iterable[tuple[int, int]], n: int) -> Optional[list[int]]:
    """A set of n pairwise-adjacent vertices among 0..vertices-1, or None.

    Depth-first branch and bound, lowest vertex first; candidates are
    restricted to later neighbours and to vertices of degree at least n-1.
    """
    if n <= 0:
        return []
    if n > vertices:
        return None
    adj: list[set[int]] = [set() for _ in range(vertices)]
    for u, v in edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    if n == 1:
        return [0]
    live = [v for v in range(vertices) if len(adj[v]) >= n - 1]

    def extend(clique: list[int], cands: list[int]) -> Optional[list[int]]:
        if len(clique) == n:
            return clique
        for i, v in enumerate(cands):
            if len(clique) + len(cands) - i < n:
                return None
            nxt = [w for w in cands[i + 1:] if w in adj[v]]
            found = extend(clique + [v], nxt)
            if found is not None:
                return found
        return None

    return extend([], live)
