"""Class-aware affinity graphs, their Laplacians, and the per-view embedding matrix.

The intrinsic graph links same-class samples with Gaussian-kernel weights
scaled by the class size; the penalty graph charges cross-class pairs and
carries (deliberately negative) same-class corrections. The embedding
matrix transports both Laplacians into feature space and combines them
through a single linear solve.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack
from scipy.spatial.distance import cdist


class SingularPenaltyError(RuntimeError):
    """Penalty Gram matrix stayed singular through the whole ridge escalation."""


@dataclass(frozen=True)
class LfdaGraphs:
    """Intrinsic and penalty weight matrices over one view's samples."""

    delta_int: np.ndarray
    delta_pen: np.ndarray
    sigma: float


@dataclass(frozen=True)
class GraphLaplacians:
    """Laplacians of the intrinsic (L) and penalty (U) graphs."""

    L: np.ndarray
    U: np.ndarray


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Symmetric feature-space embedding matrix and the ridge that produced it."""

    G: np.ndarray
    ridge_used: float


def pairwise_affinity(Z, sigma):
    """Gaussian similarity exp(-||z_k - z_l||^2 / (2 sigma^2)) for all pairs.

    The result is symmetric with unit diagonal and entries in (0, 1].
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    Z = np.asarray(Z, dtype=float)
    return np.exp(-cdist(Z, Z, "sqeuclidean") / (2.0 * sigma * sigma))


def lfda_weights(Z, labels, sigma):
    """Intrinsic and penalty graph weights for a labeled sample matrix.

    With lam the pairwise affinity, N the sample count, and N_c the size of
    sample k's class:

    - same class:      delta_int = lam / N_c,  delta_pen = lam * (1/N - 1/N_c)
    - different class: delta_int = 0,          delta_pen = 1/N

    Same-class penalty weights are negative whenever N_c < N, which is
    always the case with two nonempty classes; that sign is intentional.
    Diagonal entries follow the same-class branch with lam = 1 (they cancel
    inside the Laplacians).
    """
    Z = np.asarray(Z, dtype=float)
    labels = np.asarray(labels)
    if Z.shape[0] != labels.shape[0]:
        raise ValueError(
            f"{Z.shape[0]} rows but {labels.shape[0]} labels"
        )
    classes = np.unique(labels)
    if classes.size != 2:
        raise ValueError(
            f"labels must be binary, found {classes.size} distinct values"
        )
    lam = pairwise_affinity(Z, sigma)
    n = labels.shape[0]
    same = labels[:, None] == labels[None, :]
    class_sizes = np.array([(labels == value).sum() for value in classes])
    own_size = class_sizes[np.searchsorted(classes, labels)][:, None].astype(float)
    delta_int = np.where(same, lam / own_size, 0.0)
    delta_pen = np.where(same, lam * (1.0 / n - 1.0 / own_size), 1.0 / n)
    return LfdaGraphs(delta_int=delta_int, delta_pen=delta_pen, sigma=float(sigma))


def laplacians(graphs):
    """Graph Laplacians D - delta, with D the diagonal matrix of row sums."""
    L = np.diag(graphs.delta_int.sum(axis=1)) - graphs.delta_int
    U = np.diag(graphs.delta_pen.sum(axis=1)) - graphs.delta_pen
    return GraphLaplacians(L=L, U=U)


def embedding_matrix(Z, lap, ridge=0.0, view_name="view"):
    """Solve (Z'UZ + r*I) G = Z'LZ and return the symmetrized G.

    The penalty Gram matrix Z'UZ is often rank deficient (U annihilates
    constants, and the enhanced dimension can exceed the sample count), so
    on solve failure the ridge escalates from max(ridge, 1e-8 * t) by
    factors of 10 up to 1e-2 * t, where t = trace(|Z'UZ|)/d. A solve counts
    as failed when the LU factorization errors, the reciprocal condition
    estimate drops below 1e-14 (numerically singular), or the result is
    non-finite.
    """
    if ridge < 0:
        raise ValueError(f"ridge must be non-negative, got {ridge}")
    Z = np.asarray(Z, dtype=float)
    d = Z.shape[1]
    g_int = Z.T @ (lap.L @ Z)
    g_pen = Z.T @ (lap.U @ Z)
    scale = float(np.trace(np.abs(g_pen)) / d)
    ridge_floor = 1e-8 * scale
    ridge_cap = 1e-2 * scale

    def attempt(r):
        M = g_pen + r * np.eye(d) if r > 0 else g_pen
        lu, piv, info = lapack.dgetrf(M)
        if info != 0:
            return None
        one_norm = float(np.abs(M).sum(axis=0).max())
        rcond, info = lapack.dgecon(lu, one_norm)
        if info != 0 or not np.isfinite(rcond) or rcond < 1e-14:
            return None
        g_raw, info = lapack.dgetrs(lu, piv, g_int)
        if info != 0 or not np.all(np.isfinite(g_raw)):
            return None
        return g_raw

    ridge_used = float(ridge)
    g_raw = attempt(ridge_used)
    if g_raw is None:
        ridge_used = max(ridge_used, ridge_floor)
        while g_raw is None and 0 < ridge_used <= ridge_cap:
            g_raw = attempt(ridge_used)
            if g_raw is None:
                ridge_used *= 10.0
    if g_raw is None:
        raise SingularPenaltyError(
            f"{view_name}: penalty matrix unresolvably singular, ridge "
            f"escalation exhausted at cap {ridge_cap:.3e}"
        )
    return EmbeddingMatrix(
        G=np.ascontiguousarray((g_raw + g_raw.T) / 2.0), ridge_used=ridge_used
    )
