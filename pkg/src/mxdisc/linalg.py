"""Numeric kernels shared by the solvers.

Embeddings are ``N x k`` arrays with orthonormal columns.  Only their column
span is meaningful (eigenvector signs and rotations inside degenerate
eigenspaces are arbitrary), so comparisons between embeddings should go
through :func:`projection_distance_sq`.
"""
from __future__ import annotations

import warnings

import numpy as np
from scipy import linalg as sla

from .errors import DimensionError, ValidationError

KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 300


def _as_symmetric(m) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValidationError("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > 1e-10 * scale:
        raise ValidationError("matrix is not symmetric")
    return 0.5 * (m + m.T)


def lowest_spectrum(m, count: int) -> tuple[np.ndarray, np.ndarray]:
    """The ``count`` algebraically smallest eigenpairs of a symmetric matrix.

    Dense decomposition restricted to an index range; eigenvalues ascending.
    """
    m = _as_symmetric(m)
    n = m.shape[0]
    if not 1 <= count <= n:
        raise DimensionError(f"cannot take {count} eigenpairs of a {n}x{n} matrix")
    vals, vecs = sla.eigh(m, subset_by_index=[0, count - 1], driver="evr")
    return vals, vecs


def smallest_eigenpairs(m, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(U, eigenvalues)`` for the ``k`` smallest eigenvalues of ``m``.

    ``m`` may be indefinite.  ``U`` is ``N x k`` with orthonormal columns and
    the eigenvalues are ascending.  Requires ``1 <= k < N``.
    """
    n = np.shape(m)[0]
    if not 1 <= k < n:
        raise DimensionError(f"need 1 <= k < N, got k={k}, N={n}")
    vals, vecs = lowest_spectrum(m, k)
    return vecs, vals


def lowest_block(m, k: int) -> tuple[np.ndarray, float]:
    """Lowest ``k`` eigenvectors of ``m`` plus the gap to the next eigenvalue.

    The gap is ``inf`` when ``k == N``.
    """
    n = np.shape(m)[0]
    count = min(k + 1, n)
    vals, vecs = lowest_spectrum(m, count)
    gap = float(vals[k] - vals[k - 1]) if count > k else float("inf")
    return vecs[:, :k], gap


def orthonormality_residual(u) -> float:
    u = np.asarray(u, dtype=float)
    return float(np.abs(u.T @ u - np.eye(u.shape[1])).max(initial=0.0))


def projection_distance_sq(u, v) -> float:
    """Squared projection distance ``min(k_u, k_v) - tr(U U^T V V^T)``.

    Zero iff the smaller span lies in the larger one.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim != 2 or v.ndim != 2 or u.shape[0] != v.shape[0]:
        raise DimensionError(f"embeddings disagree on node count: {u.shape} vs {v.shape}")
    k = min(u.shape[1], v.shape[1])
    overlap = float(np.sum((u.T @ v) ** 2))
    return float(min(max(k - overlap, 0.0), k))


# ---------------------------------------------------------------------------
# k-means


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d = (
        np.sum(points**2, axis=1)[:, None]
        - 2.0 * points @ centers.T
        + np.sum(centers**2, axis=1)[None, :]
    )
    return np.maximum(d, 0.0)


def kmeanspp_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = _sq_dists(points, centers[:1])[:, 0]
    for c in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = rng.choice(n, p=closest / total)
        else:
            idx = rng.integers(n)
        centers[c] = points[idx]
        closest = np.minimum(closest, _sq_dists(points, centers[c : c + 1])[:, 0])
    return centers


def lloyd(points, centers, max_iter: int = KMEANS_MAX_ITER):
    """Lloyd iterations from the given centers.

    Returns ``(labels, centers, wcss_history)``; the history holds the
    within-cluster sum of squares after each assignment step.  Stops once
    the assignment no longer changes.
    """
    points = np.asarray(points, dtype=float)
    centers = np.array(centers, dtype=float)
    k = centers.shape[0]
    labels = None
    history: list[float] = []
    for _ in range(max_iter):
        d = _sq_dists(points, centers)
        new = np.argmin(d, axis=1)
        history.append(float(d[np.arange(len(new)), new].sum()))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        for c in range(k):
            members = labels == c
            if members.any():
                centers[c] = points[members].mean(axis=0)
            else:
                # steal the worst-served point; leaves WCSS non-increasing
                own = d[np.arange(len(labels)), labels]
                far = int(np.argmax(own))
                if own[far] > 0:
                    centers[c] = points[far]
                    labels = labels.copy()
                    labels[far] = c
    return labels, centers, history


def wcss(points, labels) -> float:
    points = np.asarray(points, dtype=float)
    total = 0.0
    for c in np.unique(labels):
        block = points[labels == c]
        total += float(np.sum((block - block.mean(axis=0)) ** 2))
    return total


def kmeans(
    points,
    k: int,
    seed: int = 0,
    *,
    restarts: int = KMEANS_RESTARTS,
    max_iter: int = KMEANS_MAX_ITER,
) -> np.ndarray:
    """Cluster the rows of ``points`` into ``k`` groups.

    k-means++ seeding with ``restarts`` independent starts (restart ``r``
    draws from ``default_rng([seed, r])``); the labeling with the lowest
    within-cluster sum of squares wins, ties going to the earliest restart.
    A ``RuntimeWarning`` is issued when the result leaves clusters empty.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n = points.shape[0]
    if points.ndim != 2 or points.shape[1] < 1:
        raise DimensionError(f"points must be N x d with d >= 1, got {points.shape}")
    if not 1 <= k <= n:
        raise DimensionError(f"need 1 <= k <= N, got k={k}, N={n}")
    if not np.isfinite(points).all():
        raise ValidationError("points have non-finite entries")
    if k == 1:
        return np.zeros(n, dtype=int)

    best_labels, best_score = None, np.inf
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        labels, _, _ = lloyd(points, kmeanspp_init(points, k, rng), max_iter)
        score = wcss(points, labels)
        if score < best_score:
            best_labels, best_score = labels, score
    empty = k - np.unique(best_labels).size
    if empty:
        warnings.warn(f"k-means left {empty} of {k} clusters empty", RuntimeWarning, stacklevel=2)
    return best_labels
