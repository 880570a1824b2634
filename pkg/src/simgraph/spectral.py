"""Normalized spectral clustering: D^-1/2 W D^-1/2, top-k eigenvectors,
row normalization onto the unit sphere, then rotation-based discretization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .similarity import SimilarityMatrix

DENSE_LIMIT = 512


class EigenConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Embedding:
    Y: np.ndarray
    eigenvalues: np.ndarray

    def dump(self, path) -> None:
        """Eigenvalues on a comment line, then one row of Y per point."""
        header = "eigenvalues " + " ".join(f"{v:.17g}" for v in self.eigenvalues)
        np.savetxt(path, self.Y, fmt="%.17g", header=header)


@dataclass(frozen=True)
class ClusteringResult:
    labels: np.ndarray
    nc: int
    k: int
    embedding: Embedding | None = field(default=None, repr=False, compare=False)

    @property
    def failed(self) -> bool:
        return self.nc < self.k


def normalized_laplacian(W: SimilarityMatrix | sp.spmatrix | np.ndarray) -> sp.csr_matrix:
    A = W.matrix if isinstance(W, SimilarityMatrix) else W
    A = sp.csr_matrix(A, dtype=float)
    d = np.asarray(A.sum(axis=1)).ravel()
    if np.any(d <= 0):
        bad = np.flatnonzero(d <= 0)
        raise ValueError(f"zero-degree node(s) {bad[:5].tolist()}: W must have positive row sums")
    # w_ij / sqrt(d_i d_j) in one rounding step: exactly symmetric when W is
    coo = A.tocoo()
    data = coo.data / np.sqrt(d[coo.row] * d[coo.col])
    return sp.csr_matrix((data, (coo.row, coo.col)), shape=A.shape)


def top_k_eigenvectors(
    L,
    k: int,
    tol: float = 1e-9,
    *,
    method: str = "auto",
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs for the k largest eigenvalues, sorted nonincreasing.

    ``method`` is ``"dense"`` (LAPACK symmetric eigensolver), ``"lanczos"``
    (block Lanczos with full reorthogonalization) or ``"auto"``, which picks
    dense up to DENSE_LIMIT nodes.
    """
    n = L.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "lanczos"
    if method == "dense":
        A = L.toarray() if sp.issparse(L) else np.asarray(L, dtype=float)
        vals, vecs = np.linalg.eigh(A)
        vals, U = vals[::-1][:k], vecs[:, ::-1][:, :k]
        res = np.linalg.norm(A @ U - U * vals, axis=0)
        if np.any(res > tol):
            raise EigenConvergenceError(f"dense residual {res.max():.2e} above tol {tol:.1e}")
        return U, vals
    if method == "lanczos":
        matvec = L.__matmul__ if sp.issparse(L) else np.asarray(L).__matmul__
        return block_lanczos(matvec, n, k, tol, seed=seed)
    raise ValueError(f"unknown eigensolver {method!r}")


def _orthonormalize(Z: np.ndarray, basis: np.ndarray | None, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal columns spanning Z minus its projection onto ``basis``.

    Columns that vanish after projection (an invariant subspace was found)
    are replaced by random directions so the block keeps its width.
    """
    n, b = Z.shape
    Z = Z.copy()
    for _ in range(2):
        if basis is not None and basis.shape[1]:
            Z -= basis @ (basis.T @ Z)
    out = np.empty_like(Z)
    for c in range(b):
        z = Z[:, c]
        for attempt in range(5):
            scale = np.linalg.norm(z)
            for _ in range(2):
                if basis is not None and basis.shape[1]:
                    z = z - basis @ (basis.T @ z)
                if c:
                    z = z - out[:, :c] @ (out[:, :c].T @ z)
            nz = np.linalg.norm(z)
            if nz > 1e-10 * max(scale, 1.0) and nz > 1e-300:
                break
            z = rng.standard_normal(n)
        else:
            raise EigenConvergenceError("could not extend the Krylov basis")
        out[:, c] = z / nz
    return out


def block_lanczos(
    matvec: Callable[[np.ndarray], np.ndarray],
    n: int,
    k: int,
    tol: float = 1e-9,
    *,
    block: int | None = None,
    basis_size: int | None = None,
    max_restarts: int = 300,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Restarted block Lanczos for the k algebraically largest eigenpairs.

    Each cycle grows a block Krylov basis with full reorthogonalization, does
    Rayleigh-Ritz on it, and restarts from the leading Ritz vectors.
    """
    rng = np.random.default_rng(seed)
    b = min(n, block or k + 2)
    m = min(n, basis_size or max(8 * b, 80))
    Q = _orthonormalize(rng.standard_normal((n, b)), None, rng)
    res = np.full(k, np.inf)
    for _ in range(max_restarts):
        blocks, images = [Q], []
        width = b
        while True:
            AV = matvec(blocks[-1])
            images.append(AV)
            if width >= m:
                break
            B = np.hstack(blocks)
            step = min(b, m - width)
            blocks.append(_orthonormalize(AV[:, :step], B, rng))
            width += step
        B = np.hstack(blocks)
        AB = np.hstack(images)
        T = B.T @ AB
        T = 0.5 * (T + T.T)
        theta, S = np.linalg.eigh(T)
        order = np.argsort(theta)[::-1]
        theta, S = theta[order], S[:, order]
        X = B @ S[:, :b]
        R = AB @ S[:, :k] - X[:, :k] * theta[:k]
        res = np.linalg.norm(R, axis=0)
        if np.all(res <= tol) or width >= n:
            U = X[:, :k]
            if width >= n:
                # basis spans the whole space: Ritz pairs are exact
                res = np.linalg.norm(matvec(U) - U * theta[:k], axis=0)
                if np.any(res > max(tol, 1e-8)):
                    raise EigenConvergenceError(f"residual {res.max():.2e} on a full basis")
            return U, theta[:k]
        Q = _orthonormalize(X, None, rng)
    raise EigenConvergenceError(f"no convergence after {max_restarts} restarts; residual {res.max():.2e}")


def row_normalize(U: np.ndarray, eigenvalues: np.ndarray | None = None) -> Embedding:
    U = np.asarray(U, dtype=float)
    norms = np.linalg.norm(U, axis=1)
    if np.any(norms == 0):
        raise ValueError(f"zero row(s) in eigenvector matrix: {np.flatnonzero(norms == 0)[:5].tolist()}")
    vals = np.zeros(U.shape[1]) if eigenvalues is None else np.asarray(eigenvalues, dtype=float)
    return Embedding(U / norms[:, None], vals)


def _compress(raw: np.ndarray) -> tuple[np.ndarray, int]:
    """Relabel cluster ids to 1..nc in order of first appearance."""
    _, first, inv = np.unique(raw, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=int)
    rank[np.argsort(first)] = np.arange(1, first.size + 1)
    return rank[inv.ravel()], first.size


def rotation_init(Y: np.ndarray) -> np.ndarray:
    """k rows of Y chosen greedily to be as mutually orthogonal as possible.

    The first row is the one farthest from the centroid of all rows.
    """
    n, k = Y.shape
    R = np.zeros((k, k))
    first = int(np.argmax(np.linalg.norm(Y - Y.mean(axis=0), axis=1)))
    R[:, 0] = Y[first]
    c = np.zeros(n)
    for j in range(1, k):
        c += np.abs(Y @ R[:, j - 1])
        R[:, j] = Y[int(np.argmin(c))]
    return R


def discretize(
    Y: Embedding | np.ndarray,
    k: int,
    seed: int = 0,
    *,
    max_iter: int = 100,
    tol: float = 1e-10,
    history: list | None = None,
) -> ClusteringResult:
    """Alternate X = argmax rows of Y R and R = V U^T from svd(X^T Y) = U S V^T.

    ``seed`` is accepted for interface symmetry with the k-means fallback;
    the greedy initialization is deterministic. If ``history`` is given the
    squared objective ||X - Y R||_F^2 after each rotation update is appended.
    """
    emb = Y if isinstance(Y, Embedding) else None
    Y = emb.Y if emb is not None else np.asarray(Y, dtype=float)
    n = Y.shape[0]
    if k == 1:
        return ClusteringResult(np.ones(n, dtype=int), 1, 1, emb)
    R = rotation_init(Y)
    prev = np.inf
    for _ in range(max_iter):
        idx = np.argmax(Y @ R, axis=1)
        X = np.zeros((n, k))
        X[np.arange(n), idx] = 1.0
        U, s, Vt = np.linalg.svd(X.T @ Y)
        R = Vt.T @ U.T
        obj = max(2.0 * (n - s.sum()), 0.0)
        if history is not None:
            history.append(float(np.sum((X - Y @ R) ** 2)))
        if prev - obj < tol:
            break
        prev = obj
    labels, nc = _compress(np.argmax(Y @ R, axis=1))
    return ClusteringResult(labels, nc, k, emb)


def kmeans_discretize(Y: Embedding | np.ndarray, k: int, seed: int = 0) -> ClusteringResult:
    from sklearn.cluster import KMeans

    emb = Y if isinstance(Y, Embedding) else None
    Y = emb.Y if emb is not None else np.asarray(Y, dtype=float)
    km = KMeans(n_clusters=k, init="k-means++", n_init=10, max_iter=300, tol=1e-9, random_state=seed)
    labels, nc = _compress(km.fit_predict(Y))
    return ClusteringResult(labels, nc, k, emb)


DISCRETIZERS = {"rotation": discretize, "kmeans": kmeans_discretize}


def spectral_cluster(
    W: SimilarityMatrix,
    k: int,
    seed: int = 0,
    *,
    tol: float = 1e-9,
    eigensolver: str = "auto",
    discretizer: str = "rotation",
) -> ClusteringResult:
    n = W.n
    if k == 1:
        return ClusteringResult(np.ones(n, dtype=int), 1, 1)
    L = normalized_laplacian(W)
    U, vals = top_k_eigenvectors(L, k, tol, method=eigensolver, seed=seed)
    emb = row_normalize(U, vals)
    return DISCRETIZERS[discretizer](emb, k, seed)
