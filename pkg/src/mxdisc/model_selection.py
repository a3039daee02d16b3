"""Choosing embedding widths: total, shared and discriminative community counts.

The total count per group comes from the eigengap of the summed Laplacian.
Shared communities are found by agglomerating the community indicator
columns of both groups: a column cluster that mixes columns from both groups
is a community the groups have in common.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import pdist

from .errors import ConfigError, DimensionError
from .linalg import lowest_spectrum
from .multiplex import MultiplexNetwork, check_same_nodes, laplacian_sum
from .spectral import consensus_cluster, indicator_embedding

DEFAULT_MERGE_THRESHOLD = 0.5
TIE_RTOL = 1e-9


@dataclass(frozen=True)
class DimensionSpec:
    kt1: int
    kt2: int
    kc: int

    def __post_init__(self):
        if self.kt1 < 1 or self.kt2 < 1:
            raise ConfigError("kt1 and kt2 must be positive")
        if not 0 <= self.kc <= min(self.kt1, self.kt2):
            raise ConfigError(f"kc={self.kc} must lie in [0, min(kt1, kt2)]")

    @property
    def k1(self) -> int:
        return self.kt1 - self.kc

    @property
    def k2(self) -> int:
        return self.kt2 - self.kc

    def as_dict(self) -> dict:
        return {"kt1": self.kt1, "kt2": self.kt2, "kc": self.kc, "k1": self.k1, "k2": self.k2}


def default_k_max(n: int) -> int:
    return max(2, min(n // 4, 20))


def eigengap_k(eigenvalues, k_max: int) -> int:
    """``argmax_{k in 2..k_max} (lambda_{k+1} - lambda_k)``; smallest k on ties.

    Gaps within ``TIE_RTOL`` (relative to the largest gap) of the maximum
    count as ties, so rounding in e.g. an evenly spaced spectrum does not
    decide the answer.
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if k_max < 2:
        raise DimensionError("k_max must be at least 2")
    if k_max >= lam.size:
        raise DimensionError(f"k_max={k_max} needs at least {k_max + 1} eigenvalues, got {lam.size}")
    gaps = lam[2 : k_max + 1] - lam[1:k_max]
    top = gaps.max()
    return int(np.flatnonzero(gaps >= top - TIE_RTOL * abs(top))[0]) + 2


def shared_community_count(x1, x2, merge_threshold: float = DEFAULT_MERGE_THRESHOLD) -> int:
    """Count column clusters of ``[x1, x2]`` holding columns from both groups.

    Average-linkage agglomeration under cosine distance between absolute
    column vectors, cut at ``merge_threshold``.
    """
    x1, x2 = np.abs(np.asarray(x1, float)), np.abs(np.asarray(x2, float))
    cols = np.hstack([x1, x2]).T
    origin = np.r_[np.zeros(x1.shape[1], int), np.ones(x2.shape[1], int)]
    dist = np.clip(pdist(cols, metric="cosine"), 0.0, None)
    labels = fcluster(linkage(dist, method="average"), t=merge_threshold, criterion="distance")
    shared = sum(
        1 for c in np.unique(labels) if np.unique(origin[labels == c]).size == 2
    )
    return min(shared, x1.shape[1], x2.shape[1])


def select_dimensions(
    net1: MultiplexNetwork,
    net2: MultiplexNetwork,
    k_max: int | None = None,
    merge_threshold: float = DEFAULT_MERGE_THRESHOLD,
    seed: int = 0,
) -> DimensionSpec:
    """Estimate ``kt1``, ``kt2`` and ``kc`` for a pair of multiplex networks.

    ``kt`` is the eigengap of each group's summed Laplacian.  Each group is
    then clustered into ``kt`` consensus communities and the normalized
    membership indicators of both groups are compared column by column
    (see :func:`shared_community_count`).
    """
    n = check_same_nodes(net1, net2)
    k_max = default_k_max(n) if k_max is None else k_max
    if k_max + 1 > n:
        raise DimensionError(f"k_max={k_max} too large for N={n}")

    kts, indicators = [], []
    for net in (net1, net2):
        vals, _ = lowest_spectrum(laplacian_sum(net), k_max + 1)
        kt = eigengap_k(vals, k_max)
        _, labels = consensus_cluster(net, kt, seed)
        kts.append(kt)
        indicators.append(indicator_embedding(labels, kt))

    kc = shared_community_count(*indicators, merge_threshold=merge_threshold)
    spec = DimensionSpec(kts[0], kts[1], kc)
    if spec.k1 == 0 or spec.k2 == 0:
        warnings.warn(
            f"no discriminative structure detected: {spec.as_dict()}",
            RuntimeWarning,
            stacklevel=2,
        )
    return spec
