"""Sparsified distance graphs: epsilon-neighbor, mutual and non-mutual kNN."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path

import numpy as np

from .metric import DistanceModel, _check_K


class SparsityKind(str, Enum):
    E = "E"  # epsilon-neighbor
    N = "N"  # non-mutual kNN
    M = "M"  # mutual kNN
    FULL = "FULL"


@dataclass(frozen=True)
class SparsityModel:
    kind: SparsityKind
    K: int = 0

    def __post_init__(self):
        if self.kind is not SparsityKind.FULL and self.K < 1:
            raise ValueError("K must be >= 1 for sparse models")


@dataclass(frozen=True, eq=False)
class SparseGraph:
    """Undirected weighted graph stored as its upper-triangle edge list.

    ``heads[e] < tails[e]``; edges are sorted by (head, tail). Weights are
    distances and are nonnegative (zero only between coincident points).
    """

    n: int
    heads: np.ndarray
    tails: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_mask(cls, mask: np.ndarray, dist: np.ndarray) -> "SparseGraph":
        """Graph with an edge (i, j) wherever ``mask`` is true, i != j."""
        upper = np.triu(mask | mask.T, 1)
        i, j = np.nonzero(upper)
        return cls(mask.shape[0], i, j, dist[i, j].astype(float))

    @classmethod
    def from_edges(cls, n: int, edges, dist: np.ndarray | None = None) -> "SparseGraph":
        """Build from (i, j) or (i, j, w) tuples; w defaults to dist[i, j]."""
        best: dict[tuple[int, int], float] = {}
        for e in edges:
            a, b = int(e[0]), int(e[1])
            if a == b:
                raise ValueError("self-loops are not allowed")
            w = float(e[2]) if len(e) > 2 else float(dist[a, b])
            best[(min(a, b), max(a, b))] = w
        keys = sorted(best)
        heads = np.array([a for a, _ in keys], dtype=int)
        tails = np.array([b for _, b in keys], dtype=int)
        w = np.array([best[k] for k in keys], dtype=float)
        return cls(n, heads, tails, w)

    @property
    def edge_count(self) -> int:
        return int(self.heads.size)

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.heads.tolist(), self.tails.tolist()))

    @cached_property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        """Per-node list of (neighbor, weight) sorted by neighbor index."""
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for a, b, w in zip(self.heads.tolist(), self.tails.tolist(), self.weights.tolist()):
            adj[a].append((b, w))
            adj[b].append((a, w))
        for lst in adj:
            lst.sort()
        return adj

    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.heads, self.tails]), minlength=self.n)

    def add_edges(self, edges: list[tuple[int, int, float]]) -> "SparseGraph":
        if not edges:
            return self
        old = list(zip(self.heads.tolist(), self.tails.tolist(), self.weights.tolist()))
        return SparseGraph.from_edges(self.n, old + list(edges))

    def dump(self, path) -> None:
        """Write ``i j weight`` per line (0-based, i < j)."""
        lines = [f"{a} {b} {w:.17g}" for a, b, w in zip(self.heads, self.tails, self.weights)]
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def complete_graph(dm: DistanceModel) -> SparseGraph:
    return SparseGraph.from_mask(np.ones((dm.n, dm.n), dtype=bool), dm.dist)


def epsilon_radius(dm: DistanceModel, K: int) -> float:
    """Mean over points of the distance to the K-th nearest neighbor."""
    return float(dm.kth_neighbor_distances(K).mean())


def build_epsilon(dm: DistanceModel, K: int) -> SparseGraph:
    return build_epsilon_radius(dm, epsilon_radius(dm, K))


def build_epsilon_radius(dm: DistanceModel, eps: float) -> SparseGraph:
    return SparseGraph.from_mask(dm.dist <= eps, dm.dist)


def knn_mask(dm: DistanceModel, K: int) -> np.ndarray:
    """Directed relation: mask[i, j] iff j is among the K nearest of i."""
    _check_K(dm.n, K)
    mask = np.zeros((dm.n, dm.n), dtype=bool)
    rows = np.repeat(np.arange(dm.n), K)
    mask[rows, dm.nn_table[:, :K].ravel()] = True
    return mask


def build_knn(dm: DistanceModel, K: int, mutual: bool) -> SparseGraph:
    directed = knn_mask(dm, K)
    sym = (directed & directed.T) if mutual else (directed | directed.T)
    return SparseGraph.from_mask(sym, dm.dist)


def build(dm: DistanceModel, model: SparsityModel) -> SparseGraph:
    if model.kind is SparsityKind.FULL:
        return complete_graph(dm)
    if model.kind is SparsityKind.E:
        return build_epsilon(dm, model.K)
    return build_knn(dm, model.K, mutual=model.kind is SparsityKind.M)


def connected_components(g: SparseGraph) -> list[list[int]]:
    """Components as sorted node lists, ordered by smallest member."""
    seen = np.zeros(g.n, dtype=bool)
    adj = g.adjacency
    comps = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        comp, queue = [root], deque([root])
        while queue:
            u = queue.popleft()
            for v, _ in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(g: SparseGraph) -> bool:
    return len(connected_components(g)) == 1


class _DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def aggregate_components(g: SparseGraph, dm: DistanceModel) -> tuple[SparseGraph, list[tuple[int, int, float]]]:
    """Connect g with the cheapest set of inter-component edges.

    Contract every component to a node, join each pair of components by their
    closest point pair, and run Kruskal on that contracted graph. Returns the
    connected graph and the edges that were added.
    """
    comps = connected_components(g)
    if len(comps) == 1:
        return g, []
    label = np.empty(g.n, dtype=int)
    for c, members in enumerate(comps):
        label[members] = c
    candidates = []
    for a in range(len(comps)):
        ia = np.asarray(comps[a])
        for b in range(a + 1, len(comps)):
            ib = np.asarray(comps[b])
            block = dm.dist[np.ix_(ia, ib)]
            # argmin returns the first minimum, i.e. the smallest (i, j) pair
            r, c = np.unravel_index(np.argmin(block), block.shape)
            i, j = int(ia[r]), int(ib[c])
            candidates.append((float(block[r, c]), min(i, j), max(i, j), a, b))
    candidates.sort()
    dsu = _DisjointSet(len(comps))
    added = []
    for w, i, j, a, b in candidates:
        if dsu.union(a, b):
            added.append((i, j, w))
            if len(added) == len(comps) - 1:
                break
    return g.add_edges(added), added
