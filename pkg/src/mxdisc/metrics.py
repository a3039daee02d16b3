"""Partition agreement (NMI) and discriminative-node ranking quality (AUC)."""
from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from .errors import DimensionError, ValidationError


def contingency(p, q) -> np.ndarray:
    p, q = np.asarray(p), np.asarray(q)
    if p.shape != q.shape or p.ndim != 1:
        raise DimensionError(f"partitions differ in length: {p.shape} vs {q.shape}")
    _, pi = np.unique(p, return_inverse=True)
    _, qi = np.unique(q, return_inverse=True)
    table = np.zeros((pi.max() + 1, qi.max() + 1))
    np.add.at(table, (pi, qi), 1)
    return table


def _entropy(counts: np.ndarray) -> float:
    prob = counts[counts > 0] / counts.sum()
    return float(-np.sum(prob * np.log(prob)))


def nmi(p, q) -> float:
    """Normalized mutual information ``2 I(P;Q) / (H(P) + H(Q))`` (natural log).

    Two single-cluster partitions count as identical (1.0).
    """
    table = contingency(p, q)
    n = table.sum()
    hp, hq = _entropy(table.sum(axis=1)), _entropy(table.sum(axis=0))
    if hp + hq == 0:
        return 1.0
    pij = table / n
    outer = np.outer(table.sum(axis=1), table.sum(axis=0)) / n**2
    nz = pij > 0
    mi = float(np.sum(pij[nz] * np.log(pij[nz] / outer[nz])))
    return float(np.clip(2.0 * mi / (hp + hq), 0.0, 1.0))


def auc_roc(scores, truth) -> float:
    """Probability that a random positive outscores a random negative.

    Ties count one half (Mann-Whitney U / (n_pos * n_neg)).
    """
    scores = np.asarray(scores, dtype=float)
    truth = np.asarray(truth, dtype=bool)
    if scores.shape != truth.shape or scores.ndim != 1:
        raise DimensionError(f"scores and truth differ in shape: {scores.shape} vs {truth.shape}")
    n_pos = int(truth.sum())
    n_neg = truth.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("AUC is undefined without both positives and negatives")
    ranks = rankdata(scores)
    u = ranks[truth].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))
