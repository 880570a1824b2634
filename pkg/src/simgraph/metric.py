"""Euclidean distances and sorted neighbor tables over the complete graph."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import Dataset


@dataclass(frozen=True)
class DistanceModel:
    """Pairwise distances plus, for each point, the other points by distance.

    ``nn_table[i]`` lists the n-1 other indices sorted by increasing distance
    from i, ties broken by ascending index.
    """

    dist: np.ndarray
    nn_table: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def kth_neighbor_distance(self, i: int, K: int) -> float:
        return kth_neighbor_distance(self, i, K)

    def kth_neighbor_distances(self, K: int) -> np.ndarray:
        """Distance from every point to its K-th nearest neighbor."""
        _check_K(self.n, K)
        idx = self.nn_table[:, K - 1]
        return self.dist[np.arange(self.n), idx]

    def mean_distance(self) -> float:
        """Mean of delta_ij over unordered pairs i < j."""
        iu = np.triu_indices(self.n, 1)
        return float(self.dist[iu].mean())


def build(d: Dataset | np.ndarray) -> DistanceModel:
    pts = d.points if isinstance(d, Dataset) else np.asarray(d, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    dist = cdist(pts, pts)
    # cdist is symmetric up to rounding; force exact symmetry
    dist = np.triu(dist, 1)
    dist = dist + dist.T
    n = dist.shape[0]
    # put self last so a stable sort leaves the other n-1 indices in front
    keyed = dist.copy()
    np.fill_diagonal(keyed, np.inf)
    order = np.argsort(keyed, axis=1, kind="stable")[:, : n - 1]
    dist.setflags(write=False)
    order.setflags(write=False)
    return DistanceModel(dist, order)


def _check_K(n: int, K: int) -> None:
    if not 1 <= K <= n - 1:
        raise ValueError(f"K={K} outside 1..{n - 1}")


def kth_neighbor_distance(dm: DistanceModel, i: int, K: int) -> float:
    _check_K(dm.n, K)
    return float(dm.dist[i, dm.nn_table[i, K - 1]])


def k_rules(n: int) -> tuple[int, int]:
    """(1 + floor(log2 n), 1 + floor(sqrt n)), each capped at n - 1."""
    if n < 2:
        raise ValueError("need n >= 2")
    k_log = 1 + (n.bit_length() - 1)
    k_sqrt = 1 + math.isqrt(n)
    return min(k_log, n - 1), min(k_sqrt, n - 1)
