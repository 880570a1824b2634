"""Prim's minimum spanning tree, heap-based for sparse graphs and O(n^2) for dense ones."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .graph import SparseGraph


class DisconnectedGraphError(ValueError):
    pass


@dataclass(frozen=True)
class SpanningTree:
    """Parent-vector representation; ``parent[root] == -1``.

    ``edge_weights[i]`` is the weight of (i, parent[i]) and is 0 at the root.
    """

    parent: np.ndarray
    edge_weights: np.ndarray
    root: int = 0

    @property
    def n(self) -> int:
        return self.parent.size

    @property
    def max_edge(self) -> float:
        if self.n < 2:
            return 0.0
        mask = self.parent >= 0
        return float(self.edge_weights[mask].max())

    @property
    def total_weight(self) -> float:
        return float(self.edge_weights[self.parent >= 0].sum())

    def edges(self) -> list[tuple[int, int]]:
        return sorted((min(i, int(p)), max(i, int(p))) for i, p in enumerate(self.parent) if p >= 0)


def prim(g: SparseGraph, root: int = 0) -> SpanningTree:
    """Lazy-deletion Prim with a binary heap, O(e log n).

    Ties between equal weights go to the smaller node index, so the tree is
    deterministic.
    """
    n = g.n
    adj = g.adjacency
    parent = np.full(n, -1, dtype=int)
    weight = np.zeros(n)
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    best[root] = 0.0
    heap = [(0.0, root, -1)]
    added = 0
    while heap:
        w, u, p = heapq.heappop(heap)
        if in_tree[u]:
            continue
        in_tree[u] = True
        parent[u], weight[u] = p, w
        added += 1
        for v, wv in adj[u]:
            if not in_tree[v] and wv < best[v]:
                best[v] = wv
                heapq.heappush(heap, (wv, v, u))
    if added != n:
        raise DisconnectedGraphError(f"graph is disconnected: reached {added} of {n} nodes")
    return SpanningTree(parent, weight, root)


def prim_dense(dist: np.ndarray, root: int = 0) -> SpanningTree:
    """Prim on the complete graph given by a distance matrix, O(n^2)."""
    dist = np.asarray(dist, dtype=float)
    n = dist.shape[0]
    parent = np.full(n, -1, dtype=int)
    weight = np.zeros(n)
    in_tree = np.zeros(n, dtype=bool)
    best = dist[root].copy()
    link = np.full(n, root, dtype=int)
    in_tree[root] = True
    best[root] = np.inf
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        u = int(np.argmin(cand))
        if not np.isfinite(cand[u]):
            raise DisconnectedGraphError("distance matrix has infinite entries")
        in_tree[u] = True
        parent[u], weight[u] = link[u], cand[u]
        closer = ~in_tree & (dist[u] < best)
        best[closer] = dist[u, closer]
        link[closer] = u
    return SpanningTree(parent, weight, root)
