"""MX-DSC: discriminative spectral clustering for two multiplex networks.

Finds an ``N x k1`` subspace that has a small normalized cut in group 1 but
a large one in group 2 (and vice versa for ``N x k2``), with a coupling term
between the two subspaces.  The joint objective is

    tr(U1' (S1 - a S2) U1) + tr(U2' (S2 - a S1) U2) - g tr(U1 U1' U2 U2')

with ``S1``, ``S2`` the summed layer Laplacians of each group.  Under
minimization the coupling term rewards overlap between the subspaces, so a
larger ``g`` draws them together.  Each block
update is an exact eigenproblem, so alternating them never increases the
objective.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError
from .linalg import lowest_block
from .multiplex import MultiplexNetwork, check_same_nodes, laplacian_sum

DEGENERACY_GAP = 1e-10

BlockCallback = Callable[[str, np.ndarray, np.ndarray], None]


@dataclass(frozen=True)
class DscConfig:
    k1: int
    k2: int
    alpha: float = 0.5
    gamma: float = 0.5
    max_iter: int = 100
    tol: float = 1e-6
    seed: int = 0
    mean_aggregate: bool = False

    def __post_init__(self):
        for name in ("alpha", "gamma", "tol"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ConfigError(f"{name} must be finite and >= 0, got {value!r}")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.k1 < 1 or self.k2 < 1:
            raise ConfigError(f"k1 and k2 must be >= 1, got {self.k1}, {self.k2}")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be >= 1")


@dataclass
class DscResult:
    u1_bar: np.ndarray
    u2_bar: np.ndarray
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    degenerate: bool = False


def group_sums(net1: MultiplexNetwork, net2: MultiplexNetwork, mean_aggregate: bool):
    s1, s2 = laplacian_sum(net1), laplacian_sum(net2)
    if mean_aggregate:
        s1, s2 = s1 / net1.n_layers, s2 / net2.n_layers
    return s1, s2


def dsc_objective(s1, s2, u1, u2, alpha: float, gamma: float) -> float:
    d1 = s1 - alpha * s2
    d2 = s2 - alpha * s1
    coupling = float(np.sum((u1.T @ u2) ** 2))
    return (
        float(np.sum(u1 * (d1 @ u1)))
        + float(np.sum(u2 * (d2 @ u2)))
        - gamma * coupling
    )


def converged_rel(prev: float, cur: float, tol: float) -> bool:
    return abs(cur - prev) <= tol * max(1.0, abs(prev))


def mx_dsc_solve(
    net1: MultiplexNetwork,
    net2: MultiplexNetwork,
    cfg: DscConfig,
    callback: Optional[BlockCallback] = None,
) -> DscResult:
    """Alternating minimization of the MX-DSC objective.

    ``U2`` starts at the ``gamma = 0`` optimum; every iteration then updates
    ``U1`` followed by ``U2``.  ``objective_trace[0]`` is the objective at the
    starting point (with ``U1`` also at its ``gamma = 0`` optimum) and one
    entry is appended per iteration.

    ``callback(block, matrix, u)`` is invoked after every block update with
    the assembled matrix whose lowest eigenvectors were taken.

    ``degenerate`` is set when a final block update had no eigengap after
    its ``k``-th eigenvalue, i.e. the subspace was not uniquely determined.
    """
    n = check_same_nodes(net1, net2)
    k1, k2 = cfg.k1, cfg.k2
    if max(k1, k2) >= n:
        raise ConfigError(f"k1={k1}, k2={k2} must both be < N={n}")
    if k1 + k2 >= n:
        warnings.warn(
            f"k1 + k2 = {k1 + k2} >= N = {n}: the subspaces cannot be fully dissimilar",
            RuntimeWarning,
            stacklevel=2,
        )
    s1, s2 = group_sums(net1, net2, cfg.mean_aggregate)
    d1 = s1 - cfg.alpha * s2
    d2 = s2 - cfg.alpha * s1

    u1, _ = lowest_block(d1, k1)
    u2, _ = lowest_block(d2, k2)
    trace = [dsc_objective(s1, s2, u1, u2, cfg.alpha, cfg.gamma)]
    result = DscResult(u1, u2, trace)

    for it in range(1, cfg.max_iter + 1):
        m1 = d1 - cfg.gamma * (u2 @ u2.T)
        u1, gap1 = lowest_block(m1, k1)
        if callback is not None:
            callback("u1_bar", m1, u1)
        m2 = d2 - cfg.gamma * (u1 @ u1.T)
        u2, gap2 = lowest_block(m2, k2)
        if callback is not None:
            callback("u2_bar", m2, u2)

        trace.append(dsc_objective(s1, s2, u1, u2, cfg.alpha, cfg.gamma))
        result.iterations = it
        result.degenerate = min(gap1, gap2) < DEGENERACY_GAP
        if converged_rel(trace[-2], trace[-1], cfg.tol):
            result.converged = True
            break

    result.u1_bar, result.u2_bar = u1, u2
    return result
