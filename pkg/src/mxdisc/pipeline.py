"""End-to-end detection and scoring on a pair of multiplex networks."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dcsc import DcscConfig, mx_dcsc_solve
from .dsc import DscConfig, mx_dsc_solve
from .errors import ConfigError
from .metrics import auc_roc, nmi
from .model_selection import DimensionSpec, select_dimensions
from .multiplex import MultiplexNetwork
from .spectral import consensus_cluster, spectral_cluster
from .subgraph import DiscriminativeLabeling, affinity_degrees, split_discriminative

MODES = ("mx-dsc", "mx-dcsc", "spectral", "consensus")


@dataclass(frozen=True)
class SolverParams:
    alpha: float = 0.5
    beta: float = 0.5
    gamma: float = 0.5
    max_iter: int = 100
    tol: float = 1e-6
    mean_aggregate: bool = False


@dataclass
class Detection:
    mode: str
    dims: DimensionSpec
    seed: int
    scores: list[np.ndarray] = field(default_factory=list)
    labelings: list[DiscriminativeLabeling] = field(default_factory=list)
    partitions: list[np.ndarray] = field(default_factory=list)
    layer_partitions: list[np.ndarray] = field(default_factory=list)
    objective_trace: list[float] = field(default_factory=list)
    embeddings: dict[str, np.ndarray] = field(default_factory=dict)
    converged: Optional[bool] = None
    degenerate: bool = False


def detect(
    net1: MultiplexNetwork,
    net2: MultiplexNetwork,
    mode: str = "mx-dsc",
    dims: DimensionSpec | None = None,
    params: SolverParams = SolverParams(),
    seed: int = 0,
    *,
    k_max: int | None = None,
    merge_threshold: float = 0.5,
) -> Detection:
    """Run one method and derive node scores, labels and partitions.

    With ``dims=None`` the widths are estimated by
    :func:`~mxdisc.model_selection.select_dimensions`.  A zero
    discriminative width marks the run degenerate; the solver then runs
    with width 1 so that labels are still produced.
    """
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")
    if dims is None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            dims = select_dimensions(net1, net2, k_max, merge_threshold, seed)
    out = Detection(mode, dims, seed)
    k1, k2 = max(dims.k1, 1), max(dims.k2, 1)
    out.degenerate = dims.k1 == 0 or dims.k2 == 0

    if mode == "mx-dsc":
        res = mx_dsc_solve(
            net1, net2,
            DscConfig(k1=k1, k2=k2, alpha=params.alpha, gamma=params.gamma,
                      max_iter=params.max_iter, tol=params.tol, seed=seed,
                      mean_aggregate=params.mean_aggregate),
        )
        bars = (res.u1_bar, res.u2_bar)
    elif mode == "mx-dcsc":
        res = mx_dcsc_solve(
            net1, net2,
            DcscConfig(k1=k1, k2=k2, kt1=dims.kt1, kt2=dims.kt2, alpha=params.alpha,
                       beta=params.beta, gamma=params.gamma, max_iter=params.max_iter,
                       tol=params.tol, seed=seed),
        )
        bars = (res.u1_bar, res.u2_bar)
        out.partitions = [res.consensus_partition_1, res.consensus_partition_2]
        out.embeddings.update(u1_star=res.u1_star, u2_star=res.u2_star)
        for g, layers in ((1, res.u1_layers), (2, res.u2_layers)):
            for l, u in enumerate(layers):
                out.embeddings[f"u{g}_layer{l}"] = u
    elif mode == "consensus":
        for net, kt in ((net1, dims.kt1), (net2, dims.kt2)):
            u, labels = consensus_cluster(net, kt, seed)
            out.partitions.append(labels)
            out.embeddings[f"u{len(out.partitions)}_star"] = u
        return out
    else:
        for net, kt in ((net1, dims.kt1), (net2, dims.kt2)):
            rows = [spectral_cluster(a, kt, seed)[1] for a in net.layers]
            out.layer_partitions.append(np.vstack(rows))
        return out

    out.objective_trace = list(res.objective_trace)
    out.converged = res.converged
    out.degenerate = out.degenerate or res.degenerate
    out.embeddings.update(u1_bar=bars[0], u2_bar=bars[1])
    for u in bars:
        scores = affinity_degrees(u)
        out.scores.append(scores)
        out.labelings.append(split_discriminative(scores, seed))
    return out


def score_detection(det: Detection, truth: dict) -> dict:
    """Metrics of one detection against a ground-truth document.

    ``truth`` is the mapping returned by :func:`mxdisc.benchmark.read_truth`
    (or built from :class:`~mxdisc.benchmark.PlantedPartitions`).  Values a
    mode cannot provide are ``None``.
    """
    rec: dict = {"nmi": None, "nmi_group1": None, "nmi_group2": None,
                 "auc_group1": None, "auc_group2": None, "auc_mean": None}
    groups = (truth["group1"], truth["group2"])
    if det.partitions:
        vals = [nmi(p, g["reference"]) for p, g in zip(det.partitions, groups)]
        rec.update(nmi_group1=vals[0], nmi_group2=vals[1], nmi=float(np.mean(vals)))
    elif det.layer_partitions:
        vals = [
            float(np.mean([nmi(p, t) for p, t in zip(parts, g["layers"])]))
            for parts, g in zip(det.layer_partitions, groups)
        ]
        rec.update(nmi_group1=vals[0], nmi_group2=vals[1], nmi=float(np.mean(vals)))
    if det.scores:
        vals = [auc_roc(s, g["discriminative"]) for s, g in zip(det.scores, groups)]
        rec.update(auc_group1=vals[0], auc_group2=vals[1], auc_mean=float(np.mean(vals)))
    return rec


def truth_from_instance(inst) -> dict:
    t = inst.truth
    return {
        "config": inst.config.to_dict(),
        "group1": {"layers": t.layers1, "reference": t.reference1, "discriminative": t.discriminative1},
        "group2": {"layers": t.layers2, "reference": t.reference2, "discriminative": t.discriminative2},
    }


def planted_dims(cfg) -> DimensionSpec:
    """Widths implied by a benchmark configuration."""
    return DimensionSpec(cfg.k_total1, cfg.k_total2, cfg.k_shared)
