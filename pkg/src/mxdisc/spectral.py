"""Single-layer and consensus (aggregated multiplex) spectral clustering."""
from __future__ import annotations

import numpy as np

from .linalg import kmeans, smallest_eigenpairs
from .multiplex import MultiplexNetwork, laplacian_sum, normalized_laplacian


def spectral_embedding(a, k: int) -> np.ndarray:
    """The ``k`` lowest eigenvectors of the normalized Laplacian of ``a``."""
    u, _ = smallest_eigenpairs(normalized_laplacian(a), k)
    return u


def spectral_cluster(a, k: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Normalized-cut spectral clustering of one graph.

    k-means runs on the raw rows of the embedding (no row normalization).

    Returns
    -------
    embedding : (N, k) ndarray
    labels : (N,) int ndarray
    """
    u = spectral_embedding(a, k)
    return u, kmeans(u, k, seed)


def consensus_embedding(net: MultiplexNetwork, k: int) -> np.ndarray:
    u, _ = smallest_eigenpairs(laplacian_sum(net), k)
    return u


def consensus_cluster(net: MultiplexNetwork, k: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Spectral clustering of the summed layer Laplacians.

    Finds one subspace representative of every layer, then one partition.
    """
    u = consensus_embedding(net, k)
    return u, kmeans(u, k, seed)


def indicator_embedding(labels, k: int | None = None) -> np.ndarray:
    """Orthonormal membership matrix: column ``c`` is ``1_c / sqrt(|c|)``.

    Empty clusters are dropped.
    """
    labels = np.asarray(labels)
    k = int(labels.max()) + 1 if k is None else k
    cols = []
    for c in range(k):
        members = labels == c
        if members.any():
            cols.append(members / np.sqrt(members.sum()))
    return np.column_stack(cols).astype(float)
