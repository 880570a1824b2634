"""Similarity matrices for the 27 catalog methods.

Method names follow the family/subscript scheme: ``F1..F3`` on the complete
graph, and ``E``/``N``/``M`` (epsilon, non-mutual kNN, mutual kNN) with
subscript 1 (unit weights), 2 (Gaussian, sigma = t), 3 (local Gaussian,
sigma_i = s_i) or 4 (Gaussian, sigma = s), each at K = K_log and K = K_sqrt.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import scipy.sparse as sp

from . import graph as graphs
from .graph import SparsityKind, SparsityModel
from .metric import DistanceModel, k_rules
from .scaling import (
    ScaleKind,
    ScaleSelection,
    scale_full_F1,
    scale_full_local_F2,
    scale_s_local,
    scale_s_mean,
    scale_t,
)

EPS = 2.0**-52

FAMILIES = ("F", "E", "N", "M")
K_RULES = ("log", "sqrt")
_K_LABEL = {"log": "Kl", "sqrt": "Ks"}


@dataclass(frozen=True, order=True)
class MethodSpec:
    family: str
    variant: int
    k_rule: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.family == "F":
            if self.variant not in (1, 2, 3):
                raise ValueError("F methods have variants 1..3")
            if self.k_rule is not None:
                raise ValueError("F methods take no K rule")
        else:
            if self.variant not in (1, 2, 3, 4):
                raise ValueError(f"{self.family} methods have variants 1..4")
            if self.k_rule not in K_RULES:
                raise ValueError(f"k_rule must be one of {K_RULES}")

    @property
    def name(self) -> str:
        base = f"{self.family}{self.variant}"
        return base if self.k_rule is None else f"{base}_{_K_LABEL[self.k_rule]}"

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, name: str) -> "MethodSpec":
        name = name.strip()
        family, rest = name[0].upper(), name[1:]
        variant, _, krule = rest.partition("_")
        rule = {"Kl": "log", "Ks": "sqrt", "": None}.get(krule)
        if krule and rule is None:
            raise ValueError(f"bad K rule in method name {name!r}")
        return cls(family, int(variant), rule)

    def sparsity(self, n: int, K: int | None = None) -> SparsityModel:
        """Sparsity model at n points; ``K`` overrides the method's K rule."""
        if self.family == "F":
            return SparsityModel(SparsityKind.FULL)
        if K is None:
            k_log, k_sqrt = k_rules(n)
            K = k_log if self.k_rule == "log" else k_sqrt
        return SparsityModel(SparsityKind(self.family), K)


def catalog() -> list[MethodSpec]:
    """All 27 methods in table order: F1..F3, then E/N/M 1..4 at K_log, then at K_sqrt."""
    specs = [MethodSpec("F", v) for v in (1, 2, 3)]
    for rule in K_RULES:
        specs += [MethodSpec(f, v, rule) for f in "ENM" for v in (1, 2, 3, 4)]
    return specs


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Symmetric nonnegative W in CSR form; entries below EPS are not stored."""

    matrix: sp.csr_matrix

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def stored_nonzeros(self) -> int:
        return int(self.matrix.nnz)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def scaled(self, c: float) -> "SimilarityMatrix":
        return SimilarityMatrix((self.matrix * c).tocsr())

    def dump(self, path) -> None:
        """Coordinate text ``i j w``, 1-based, sorted by (i, j)."""
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        lines = [f"{coo.row[e] + 1} {coo.col[e] + 1} {coo.data[e]:.17g}" for e in order]
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


@dataclass
class Diagnostics:
    method: str
    K: int | None = None
    epsilon: float | None = None
    sigma: float | None = None
    sigma_i_min: float | None = None
    sigma_i_mean: float | None = None
    sigma_i_max: float | None = None
    delta_edges: int | None = None
    aggregation_edges: int = 0
    extra: dict[str, Any] = field(default_factory=dict)


def gaussian(delta: np.ndarray, sigma: float) -> np.ndarray:
    return np.exp(-np.square(delta) / (2.0 * sigma * sigma))


def gaussian_local(delta: np.ndarray, sigma_a: np.ndarray, sigma_b: np.ndarray) -> np.ndarray:
    """exp(-delta^2 / (2 sigma_a sigma_b)); a zero scale product gives 1 at delta = 0, else 0."""
    prod = sigma_a * sigma_b
    pos = prod > 0
    out = np.where(pos, np.exp(-np.square(delta) / (2.0 * np.where(pos, prod, 1.0))), 0.0)
    return np.where(~pos & (delta == 0), 1.0, out)


def _from_edges(n: int, i: np.ndarray, j: np.ndarray, w: np.ndarray) -> SimilarityMatrix:
    keep = w >= EPS
    i, j, w = i[keep], j[keep], w[keep]
    m = sp.coo_matrix((np.concatenate([w, w]), (np.concatenate([i, j]), np.concatenate([j, i]))), shape=(n, n))
    return SimilarityMatrix(m.tocsr())


def _from_dense(w: np.ndarray) -> SimilarityMatrix:
    w = w.copy()
    np.fill_diagonal(w, 0.0)
    w[w < EPS] = 0.0
    return SimilarityMatrix(sp.csr_matrix(w))


def build_W(spec: MethodSpec, dm: DistanceModel, K: int | None = None) -> tuple[SimilarityMatrix, Diagnostics]:
    """W and its diagnostics. ``K`` replaces the K rule of a sparse method (F methods ignore it)."""
    if spec.family == "F":
        return _build_full(spec, dm)
    return _build_sparse(spec, dm, K)


def _build_full(spec: MethodSpec, dm: DistanceModel) -> tuple[SimilarityMatrix, Diagnostics]:
    diag = Diagnostics(spec.name, delta_edges=dm.n * (dm.n - 1) // 2)
    if spec.variant == 1:
        sigma = scale_full_F1(dm)
        diag.sigma = sigma
        diag.extra["mean_distance"] = dm.mean_distance()
        return _from_dense(gaussian(dm.dist, sigma)), diag
    sigma_i = scale_full_local_F2(dm)
    diag.K = k_rules(dm.n)[0]
    if spec.variant == 2:
        _record_local(diag, sigma_i)
        return _from_dense(gaussian_local(dm.dist, sigma_i[:, None], sigma_i[None, :])), diag
    sigma = scale_s_mean(sigma_i)
    diag.sigma = sigma
    return _from_dense(gaussian(dm.dist, sigma)), diag


def _record_local(diag: Diagnostics, sigma_i: np.ndarray) -> None:
    diag.sigma_i_min = float(sigma_i.min())
    diag.sigma_i_mean = float(sigma_i.mean())
    diag.sigma_i_max = float(sigma_i.max())


def sparse_graph(spec: MethodSpec, dm: DistanceModel, K: int | None = None) -> tuple[graphs.SparseGraph, Diagnostics]:
    """The aggregated (connected) graph Delta for a sparse method."""
    model = spec.sparsity(dm.n, K)
    diag = Diagnostics(spec.name, K=model.K)
    if model.kind is SparsityKind.E:
        diag.epsilon = graphs.epsilon_radius(dm, model.K)
    delta = graphs.build(dm, model)
    delta, added = graphs.aggregate_components(delta, dm)
    diag.aggregation_edges = len(added)
    diag.delta_edges = delta.edge_count
    return delta, diag


def scale_selection(spec: MethodSpec, delta: graphs.SparseGraph) -> ScaleSelection:
    if spec.variant == 1:
        return ScaleSelection.unit()
    if spec.variant == 2:
        return ScaleSelection.global_(scale_t(delta))
    s = scale_s_local(delta)
    if spec.variant == 3:
        return ScaleSelection.local(s)
    return ScaleSelection.global_(scale_s_mean(s))


def _build_sparse(spec: MethodSpec, dm: DistanceModel, K: int | None = None) -> tuple[SimilarityMatrix, Diagnostics]:
    delta, diag = sparse_graph(spec, dm, K)
    scale = scale_selection(spec, delta)
    i, j, d = delta.heads, delta.tails, delta.weights
    if scale.kind is ScaleKind.UNIT:
        w = np.ones_like(d)
    elif scale.kind is ScaleKind.GLOBAL:
        diag.sigma = scale.sigma
        w = gaussian(d, scale.sigma)
    else:
        _record_local(diag, scale.sigma_i)
        w = gaussian_local(d, scale.sigma_i[i], scale.sigma_i[j])
    return _from_edges(dm.n, i, j, w), diag


def sparsity_level(W: SimilarityMatrix) -> float:
    """Fraction of the n^2 entries of W below EPS."""
    n = W.n
    if n == 0:
        return 1.0
    nnz = int(np.count_nonzero(W.matrix.data >= EPS))
    return (n * n - nnz) / (n * n)
