"""Gaussian scale parameters.

Sparse families read their scales off the sparsified graph: ``t`` is the
largest edge of its minimum spanning tree, ``s_i`` the longest edge touching
node i, and ``s`` the mean of the ``s_i``. Full-graph families use the MST of
the complete graph (capped at the mean distance) or K-th neighbor distances.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .graph import SparseGraph
from .metric import DistanceModel, k_rules
from .mst import prim, prim_dense


class ScaleKind(str, Enum):
    UNIT = "unit"
    GLOBAL = "global"
    LOCAL = "local"


@dataclass(frozen=True)
class ScaleSelection:
    kind: ScaleKind
    sigma: float | None = None
    sigma_i: np.ndarray | None = None

    @classmethod
    def unit(cls) -> "ScaleSelection":
        return cls(ScaleKind.UNIT)

    @classmethod
    def global_(cls, sigma: float) -> "ScaleSelection":
        return cls(ScaleKind.GLOBAL, sigma=float(sigma))

    @classmethod
    def local(cls, sigma_i) -> "ScaleSelection":
        return cls(ScaleKind.LOCAL, sigma_i=np.asarray(sigma_i, dtype=float))


def scale_t(delta: SparseGraph) -> float:
    return prim(delta).max_edge


def scale_s_local(delta: SparseGraph) -> np.ndarray:
    if delta.n and np.any(delta.degrees() == 0):
        raise ValueError("isolated node: every node needs at least one edge")
    s = np.zeros(delta.n)
    np.maximum.at(s, delta.heads, delta.weights)
    np.maximum.at(s, delta.tails, delta.weights)
    return s


def scale_s_mean(s_local) -> float:
    s_local = np.asarray(s_local, dtype=float)
    if s_local.size == 0:
        raise ValueError("empty scale vector")
    return float(s_local.mean())


def scale_full_F1(dm: DistanceModel) -> float:
    """Largest MST edge of the complete graph, capped at the mean distance."""
    return min(prim_dense(dm.dist).max_edge, dm.mean_distance())


def scale_full_local_F2(dm: DistanceModel) -> np.ndarray:
    k_log, _ = k_rules(dm.n)
    return dm.kth_neighbor_distances(k_log)
