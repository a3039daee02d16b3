"""MX-DCSC: joint discriminative, layerwise and consensus spectral clustering.

Six groups of orthonormal blocks are learned for two multiplex networks:

* ``u1_bar`` (N x k1), ``u2_bar`` (N x k2): discriminative subspaces,
* ``u1_layers[l]`` (N x kt1), ``u2_layers[m]`` (N x kt2): one per layer,
* ``u1_star`` (N x kt1), ``u2_star`` (N x kt2): consensus subspaces.

The objective adds, for each group, a discriminative term (own summed
Laplacian plus ``alpha`` times the projectors of the other group's layer
subspaces), layerwise normalized-cut terms and a consensus term (summed
Laplacian minus ``beta`` times the group's own layer projectors), and
subtracts ``gamma`` times the overlap of the two discriminative subspaces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dsc import DEGENERACY_GAP, BlockCallback, converged_rel
from .errors import ConfigError
from .linalg import kmeans, lowest_block
from .multiplex import MultiplexNetwork, check_same_nodes, layer_laplacians


@dataclass(frozen=True)
class DcscConfig:
    k1: int
    k2: int
    kt1: int
    kt2: int
    alpha: float = 0.5
    beta: float = 0.5
    gamma: float = 0.5
    max_iter: int = 100
    tol: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ConfigError(f"{name} must be finite and >= 0, got {value!r}")
        if not (math.isfinite(self.tol) and self.tol > 0):
            raise ConfigError("tol must be positive")
        for name in ("k1", "k2", "kt1", "kt2", "max_iter"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")


@dataclass
class DcscResult:
    u1_bar: np.ndarray
    u2_bar: np.ndarray
    u1_layers: list[np.ndarray]
    u2_layers: list[np.ndarray]
    u1_star: np.ndarray
    u2_star: np.ndarray
    consensus_partition_1: Optional[np.ndarray] = None
    consensus_partition_2: Optional[np.ndarray] = None
    objective_trace: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    degenerate: bool = False


def _quad(m: np.ndarray, u: np.ndarray) -> float:
    return float(np.sum(u * (m @ u)))


def _overlap(u: np.ndarray, v: np.ndarray) -> float:
    """tr(U U' V V')."""
    return float(np.sum((u.T @ v) ** 2))


def _projector_sum(blocks) -> np.ndarray:
    return sum(u @ u.T for u in blocks)


class _Problem:
    def __init__(self, lap1, lap2, cfg: DcscConfig):
        self.lap1, self.lap2 = lap1, lap2
        self.s1, self.s2 = np.sum(lap1, axis=0), np.sum(lap2, axis=0)
        self.cfg = cfg

    def objective(self, ub1, ub2, ul1, ul2, us1, us2) -> float:
        a, b, g = self.cfg.alpha, self.cfg.beta, self.cfg.gamma
        dis1 = _quad(self.s1, ub1) + a * sum(_overlap(ub1, u) for u in ul2)
        dis2 = _quad(self.s2, ub2) + a * sum(_overlap(ub2, u) for u in ul1)
        lw1 = sum(_quad(lap, u) for lap, u in zip(self.lap1, ul1))
        lw2 = sum(_quad(lap, u) for lap, u in zip(self.lap2, ul2))
        con1 = _quad(self.s1, us1) - b * sum(_overlap(us1, u) for u in ul1)
        con2 = _quad(self.s2, us2) - b * sum(_overlap(us2, u) for u in ul2)
        return dis1 + dis2 - g * _overlap(ub1, ub2) + lw1 + lw2 + con1 + con2


def mx_dcsc_solve(
    net1: MultiplexNetwork,
    net2: MultiplexNetwork,
    cfg: DcscConfig,
    callback: Optional[BlockCallback] = None,
) -> DcscResult:
    """Six-block alternating minimization of the MX-DCSC objective.

    Layer and consensus blocks start at their decoupled optima (per-layer and
    aggregated spectral embeddings); ``u2_bar`` starts at the ``gamma = 0``
    optimum given the initial layer blocks.  Each iteration updates, in
    order, ``u1_bar``, ``u2_bar``, the group-1 layers, the group-2 layers,
    ``u1_star`` and ``u2_star``, always using the freshest blocks.

    ``callback(block, matrix, u)`` sees every block update, with ``block``
    one of ``u1_bar``, ``u2_bar``, ``u1_layer[l]``, ``u2_layer[m]``,
    ``u1_star``, ``u2_star``.
    """
    n = check_same_nodes(net1, net2)
    if max(cfg.k1, cfg.k2, cfg.kt1, cfg.kt2) >= n:
        raise ConfigError(f"all embedding widths must be < N={n}")
    lap1, lap2 = layer_laplacians(net1), layer_laplacians(net2)
    prob = _Problem(lap1, lap2, cfg)
    a, b, g = cfg.alpha, cfg.beta, cfg.gamma

    def notify(name, m, u):
        if callback is not None:
            callback(name, m, u)

    ul1 = [lowest_block(lap, cfg.kt1)[0] for lap in lap1]
    ul2 = [lowest_block(lap, cfg.kt2)[0] for lap in lap2]
    us1 = lowest_block(prob.s1, cfg.kt1)[0]
    us2 = lowest_block(prob.s2, cfg.kt2)[0]
    p1, p2 = _projector_sum(ul1), _projector_sum(ul2)
    ub1 = lowest_block(prob.s1 + a * p2, cfg.k1)[0]
    ub2 = lowest_block(prob.s2 + a * p1, cfg.k2)[0]

    trace = [prob.objective(ub1, ub2, ul1, ul2, us1, us2)]
    result = DcscResult(ub1, ub2, ul1, ul2, us1, us2, objective_trace=trace)

    for it in range(1, cfg.max_iter + 1):
        m = prob.s1 + a * p2 - g * (ub2 @ ub2.T)
        ub1, gap1 = lowest_block(m, cfg.k1)
        notify("u1_bar", m, ub1)
        m = prob.s2 + a * p1 - g * (ub1 @ ub1.T)
        ub2, gap2 = lowest_block(m, cfg.k2)
        notify("u2_bar", m, ub2)

        push1 = a * (ub2 @ ub2.T) - b * (us1 @ us1.T)
        new = []
        for l, lap in enumerate(lap1):
            m = lap + push1
            new.append(lowest_block(m, cfg.kt1)[0])
            notify(f"u1_layer[{l}]", m, new[-1])
        ul1 = new
        push2 = a * (ub1 @ ub1.T) - b * (us2 @ us2.T)
        new = []
        for l, lap in enumerate(lap2):
            m = lap + push2
            new.append(lowest_block(m, cfg.kt2)[0])
            notify(f"u2_layer[{l}]", m, new[-1])
        ul2 = new
        p1, p2 = _projector_sum(ul1), _projector_sum(ul2)

        m = prob.s1 - b * p1
        us1 = lowest_block(m, cfg.kt1)[0]
        notify("u1_star", m, us1)
        m = prob.s2 - b * p2
        us2 = lowest_block(m, cfg.kt2)[0]
        notify("u2_star", m, us2)

        trace.append(prob.objective(ub1, ub2, ul1, ul2, us1, us2))
        result.iterations = it
        result.degenerate = min(gap1, gap2) < DEGENERACY_GAP
        if converged_rel(trace[-2], trace[-1], cfg.tol):
            result.converged = True
            break

    result.u1_bar, result.u2_bar = ub1, ub2
    result.u1_layers, result.u2_layers = ul1, ul2
    result.u1_star, result.u2_star = us1, us2
    result.consensus_partition_1 = kmeans(us1, cfg.kt1, cfg.seed)
    result.consensus_partition_2 = kmeans(us2, cfg.kt2, cfg.seed)
    return result
