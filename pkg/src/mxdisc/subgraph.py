"""Split nodes into discriminative and shared sets from a learned subspace.

Each node is scored by its degree in the projector ``Z = U U'`` (sum of
absolute entries of its row); a one-dimensional 2-means on those degrees
separates high-degree (discriminative) from low-degree nodes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError


@dataclass(frozen=True)
class DiscriminativeLabeling:
    is_discriminative: np.ndarray
    centroids: tuple[float, float]
    degenerate: bool = False


def affinity_degrees(u) -> np.ndarray:
    """Row sums of ``|U U'|``."""
    u = np.asarray(u, dtype=float)
    return np.abs(u @ u.T).sum(axis=1)


def split_two_means_1d(values) -> tuple[np.ndarray, float, float]:
    """Globally optimal 2-means of scalars.

    Scans every split of the sorted values and keeps the one with the
    smallest within-cluster sum of squares (earliest split on ties).
    Returns ``(high_mask, low_mean, high_mean)``.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 2:
        raise DimensionError("need at least two values to split")
    order = np.argsort(x, kind="stable")
    xs = x[order]
    csum = np.cumsum(xs)
    csq = np.cumsum(xs**2)
    left_n = np.arange(1, n)
    right_n = n - left_n
    left_sum, right_sum = csum[:-1], csum[-1] - csum[:-1]
    left_sq, right_sq = csq[:-1], csq[-1] - csq[:-1]
    cost = (left_sq - left_sum**2 / left_n) + (right_sq - right_sum**2 / right_n)
    cut = int(np.argmin(cost)) + 1
    high = np.zeros(n, dtype=bool)
    high[order[cut:]] = True
    return high, float(xs[:cut].mean()), float(xs[cut:].mean())


def split_discriminative(scores, seed: int = 0) -> DiscriminativeLabeling:
    """Label the higher-degree cluster of a 1-D 2-means as discriminative.

    The split is exact, so ``seed`` is accepted only for interface symmetry
    with the other clustering calls.  Identical scores give an all-False
    labeling with ``degenerate=True``.
    """
    scores = np.asarray(scores, dtype=float)
    if scores.ndim != 1 or scores.size < 2:
        raise DimensionError("scores must be a vector with at least two entries")
    spread = scores.max() - scores.min()
    if spread <= 1e-12 * max(1.0, float(np.abs(scores).max())):
        mean = float(scores.mean())
        return DiscriminativeLabeling(np.zeros(scores.size, dtype=bool), (mean, mean), True)
    high, lo, hi = split_two_means_1d(scores)
    return DiscriminativeLabeling(high, (lo, hi))
