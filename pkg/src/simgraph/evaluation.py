"""External clustering indices computed from the contingency table."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .spectral import ClusteringResult


@dataclass(frozen=True)
class ContingencyTable:
    """counts[i, j] = points in obtained cluster i and target cluster j."""

    counts: np.ndarray

    @classmethod
    def from_labels(cls, obtained, target) -> "ContingencyTable":
        a = _labels(obtained)
        b = _labels(target)
        if a.shape != b.shape:
            raise ValueError("label vectors differ in length")
        _, ai = np.unique(a, return_inverse=True)
        _, bi = np.unique(b, return_inverse=True)
        counts = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
        np.add.at(counts, (ai.ravel(), bi.ravel()), 1)
        return cls(counts)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)


def _labels(x) -> np.ndarray:
    if isinstance(x, ClusteringResult):
        return np.asarray(x.labels)
    return np.asarray(x)


def _xlogx_ratio(counts: np.ndarray, n: int) -> float:
    c = counts[counts > 0].astype(float)
    return float(np.sum(c * np.log(c / n)))


def nmi(obtained, target) -> float:
    """Arithmetic-mean normalized mutual information.

    2 * sum n_ij log(n n_ij / (n_i m_j)) / -(sum n_i log(n_i/n) + sum m_j log(m_j/n)).
    When both partitions are a single cluster the ratio is 0/0; it is taken
    as 1 (the partitions are identical).
    """
    t = ContingencyTable.from_labels(obtained, target)
    n = t.n
    if np.count_nonzero(t.counts) == t.counts.shape[0] == t.counts.shape[1]:
        # same partition up to relabeling; skip the rounding in the logs
        return 1.0
    rows, cols = t.row_sums.astype(float), t.col_sums.astype(float)
    i, j = np.nonzero(t.counts)
    nij = t.counts[i, j].astype(float)
    mi = float(np.sum(nij * np.log(n * nij / (rows[i] * cols[j]))))
    denom = -(_xlogx_ratio(t.col_sums, n) + _xlogx_ratio(t.row_sums, n))
    if denom == 0.0:
        return 1.0 if t.counts.shape == (1, 1) else 0.0
    return min(max(2.0 * mi / denom, 0.0), 1.0)


def purity(obtained, target) -> float:
    t = ContingencyTable.from_labels(obtained, target)
    return float(t.counts.max(axis=1).sum() / t.n)


def rand_index(obtained, target) -> float:
    """Fraction of point pairs on which the two partitions agree."""
    t = ContingencyTable.from_labels(obtained, target)
    n = t.n
    if n < 2:
        return 1.0

    def pairs(x):
        x = x.astype(np.int64)
        return int(np.sum(x * (x - 1) // 2))

    total = n * (n - 1) // 2
    both = pairs(t.counts)
    same_obt = pairs(t.row_sums)
    same_tar = pairs(t.col_sums)
    agree = total + 2 * both - same_obt - same_tar
    return agree / total


def clustering_error(obtained, target) -> float:
    """1 - (best one-to-one matching of clusters) / n, via the Hungarian method."""
    t = ContingencyTable.from_labels(obtained, target)
    r, c = linear_sum_assignment(t.counts, maximize=True)
    return 1.0 - float(t.counts[r, c].sum()) / t.n


def all_indices(obtained, target) -> dict[str, float]:
    return {
        "nmi": nmi(obtained, target),
        "purity": purity(obtained, target),
        "rand": rand_index(obtained, target),
        "ce": clustering_error(obtained, target),
    }
