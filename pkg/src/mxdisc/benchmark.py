"""Paired multiplex benchmarks with planted shared and discriminative communities.

Both groups draw on one node set.  A random subset of ``n_shared`` nodes is
split evenly into ``k_shared`` communities common to the two groups; in
every layer each of these nodes keeps its reference community with
probability ``p1`` and is otherwise reassigned uniformly among the shared
communities.  The remaining nodes are partitioned, independently for each
group, into ``k_total - k_shared`` balanced discriminative communities.

Layers are sampled from a degree-corrected block model with constant
expected degree ``d``: a pair inside community ``c`` (size ``s_c``) is linked
with probability ``(1 - mu) d / (s_c - 1)``, a pair across communities with
the mean of ``mu d / (N - s_c(i))`` and ``mu d / (N - s_c(j))``.
"""
from __future__ import annotations

import dataclasses
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError, ValidationError
from .multiplex import MultiplexNetwork

TRUTH_FORMAT = "mxdisc-truth"


@dataclass(frozen=True)
class BenchmarkConfig:
    n: int = 256
    layers1: int = 10
    layers2: int = 10
    k_total1: int = 6
    k_total2: int = 5
    k_shared: int = 2
    n_shared: Optional[int] = None
    mu: float = 0.1
    p1: float = 1.0
    expected_degree: float = 16.0
    seed: int = 0
    p_disc: float = 1.0

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError("n must be at least 2")
        if self.layers1 < 1 or self.layers2 < 1:
            raise ConfigError("each group needs at least one layer")
        if self.k_total1 < 1 or self.k_total2 < 1:
            raise ConfigError("k_total1 and k_total2 must be positive")
        if not 0 <= self.k_shared <= min(self.k_total1, self.k_total2):
            raise ConfigError("k_shared must lie in [0, min(k_total1, k_total2)]")
        for name in ("mu", "p1", "p_disc"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ConfigError(f"{name} must lie in [0, 1], got {value!r}")
        if not (math.isfinite(self.expected_degree) and self.expected_degree > 0):
            raise ConfigError("expected_degree must be positive")
        ns = self.resolved_n_shared
        if self.k_shared == 0 and ns > 0:
            raise ConfigError("n_shared > 0 requires k_shared > 0")
        if not 0 <= ns < self.n:
            raise ConfigError(f"n_shared={ns} must lie in [0, n)")
        if self.k_shared and ns < self.k_shared:
            raise ConfigError("fewer shared nodes than shared communities")
        rest = self.n - ns
        for kt in (self.k_total1, self.k_total2):
            if kt - self.k_shared < 1:
                raise ConfigError(
                    f"k_total={kt} with k_shared={self.k_shared} leaves no community "
                    f"for the {rest} non-shared nodes"
                )
            if rest < kt - self.k_shared:
                raise ConfigError("fewer non-shared nodes than discriminative communities")

    @property
    def resolved_n_shared(self) -> int:
        if self.n_shared is not None:
            return int(self.n_shared)
        return int(round(self.n * self.k_shared / max(self.k_total1, self.k_total2)))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "BenchmarkConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown benchmark keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class PlantedPartitions:
    """Ground truth for both groups.

    ``layers1`` is ``L x N`` (one label row per layer), ``reference1`` the
    unperturbed per-node label; labels ``< k_shared`` are shared
    communities.
    """

    layers1: np.ndarray
    layers2: np.ndarray
    reference1: np.ndarray
    reference2: np.ndarray
    discriminative1: np.ndarray
    discriminative2: np.ndarray


@dataclass(frozen=True)
class BenchmarkInstance:
    net1: MultiplexNetwork
    net2: MultiplexNetwork
    truth: PlantedPartitions
    config: BenchmarkConfig

    @property
    def truth1(self) -> list[np.ndarray]:
        return list(self.truth.layers1)

    @property
    def truth2(self) -> list[np.ndarray]:
        return list(self.truth.layers2)

    @property
    def discriminative_nodes1(self) -> np.ndarray:
        return self.truth.discriminative1

    @property
    def discriminative_nodes2(self) -> np.ndarray:
        return self.truth.discriminative2


def _balanced(nodes: np.ndarray, k: int, offset: int, rng: np.random.Generator) -> tuple:
    perm = rng.permutation(nodes)
    return perm, offset + np.arange(perm.size) % k


def _perturb(ref: np.ndarray, mask: np.ndarray, keep: float, lo: int, hi: int, rng) -> np.ndarray:
    out = ref.copy()
    idx = np.flatnonzero(mask)
    moved = idx[rng.random(idx.size) >= keep]
    out[moved] = rng.integers(lo, hi, size=moved.size)
    return out


def generate_partition_pair(cfg: BenchmarkConfig) -> PlantedPartitions:
    rng = np.random.default_rng([cfg.seed, 0])
    n, kc = cfg.n, cfg.k_shared
    shared_ref = np.full(n, -1)
    shared_nodes = rng.choice(n, size=cfg.resolved_n_shared, replace=False)
    if kc:
        perm, labels = _balanced(shared_nodes, kc, 0, rng)
        shared_ref[perm] = labels
    is_shared = shared_ref >= 0
    rest = np.flatnonzero(~is_shared)

    groups = []
    for kt, n_layers in ((cfg.k_total1, cfg.layers1), (cfg.k_total2, cfg.layers2)):
        ref = shared_ref.copy()
        perm, labels = _balanced(rest, kt - kc, kc, rng)
        ref[perm] = labels
        layers = np.empty((n_layers, n), dtype=int)
        for l in range(n_layers):
            lab = _perturb(ref, is_shared, cfg.p1, 0, kc, rng) if kc else ref.copy()
            lab = _perturb(lab, ~is_shared, cfg.p_disc, kc, kt, rng)
            layers[l] = lab
        groups.append((layers, ref))

    (l1, r1), (l2, r2) = groups
    disc = ~is_shared
    return PlantedPartitions(l1, l2, r1, r2, disc.copy(), disc.copy())


def edge_probabilities(labels, mu: float, degree: float) -> tuple[np.ndarray, int]:
    """Pairwise link probabilities for one layer and the number clipped at 1."""
    labels = np.asarray(labels)
    n = labels.size
    sizes = np.bincount(labels)[labels].astype(float)
    with np.errstate(divide="ignore", invalid="ignore"):
        p_in = np.where(sizes > 1, (1.0 - mu) * degree / (sizes - 1.0), 0.0)
        p_out = np.where(sizes < n, mu * degree / (n - sizes), 0.0)
    same = labels[:, None] == labels[None, :]
    p = np.where(same, p_in[:, None], 0.5 * (p_out[:, None] + p_out[None, :]))
    np.fill_diagonal(p, 0.0)
    over = np.triu(p > 1.0, 1)
    return np.minimum(p, 1.0), int(over.sum())


def sample_layer(labels, mu: float, degree: float, rng: np.random.Generator) -> tuple[np.ndarray, int]:
    p, clipped = edge_probabilities(labels, mu, degree)
    n = p.shape[0]
    iu = np.triu_indices(n, 1)
    a = np.zeros((n, n))
    a[iu] = (rng.random(iu[0].size) < p[iu]).astype(float)
    return a + a.T, clipped


def planted_partition(sizes, p_in: float, p_out: float, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Plain stochastic block model with constant within/between probabilities."""
    labels = np.repeat(np.arange(len(sizes)), sizes)
    n = labels.size
    p = np.where(labels[:, None] == labels[None, :], p_in, p_out)
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    a = np.zeros((n, n))
    a[iu] = (rng.random(iu[0].size) < p[iu]).astype(float)
    return a + a.T, labels


def generate_instance(cfg: BenchmarkConfig) -> BenchmarkInstance:
    truth = generate_partition_pair(cfg)
    nets, clipped = [], 0
    for g, layers in enumerate((truth.layers1, truth.layers2), start=1):
        adj = []
        for l, labels in enumerate(layers):
            rng = np.random.default_rng([cfg.seed, 1, g, l])
            a, c = sample_layer(labels, cfg.mu, cfg.expected_degree, rng)
            adj.append(a)
            clipped += c
        nets.append(MultiplexNetwork(tuple(adj)))
    if clipped:
        warnings.warn(
            f"{clipped} edge probabilities exceeded 1 and were clipped",
            RuntimeWarning,
            stacklevel=2,
        )
    return BenchmarkInstance(nets[0], nets[1], truth, cfg)


# ---------------------------------------------------------------------------
# ground-truth file


def truth_document(inst: BenchmarkInstance) -> dict:
    t = inst.truth
    return {
        "format": TRUTH_FORMAT,
        "version": 1,
        "config": inst.config.to_dict(),
        "note": (
            "reference = unperturbed per-node label (shared reference community "
            "or discriminative community); layers = per-layer planted labels; "
            "labels below k_shared are shared communities"
        ),
        "group1": {
            "layers": t.layers1.tolist(),
            "reference": t.reference1.tolist(),
            "discriminative": t.discriminative1.astype(int).tolist(),
        },
        "group2": {
            "layers": t.layers2.tolist(),
            "reference": t.reference2.tolist(),
            "discriminative": t.discriminative2.astype(int).tolist(),
        },
    }


def write_truth(inst: BenchmarkInstance, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(truth_document(inst), indent=1) + "\n", encoding="utf-8", newline="\n")
    return path


def read_truth(path) -> dict:
    """Load a ground-truth file as ``{"group1": {...}, "group2": {...}, "config": {...}}``.

    Label fields come back as integer arrays and discriminative flags as
    boolean arrays.
    """
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    for key in ("config", "group1", "group2"):
        if key not in doc:
            raise ValidationError(f"truth file {path}: missing field '{key}'")
    out = {"config": doc["config"]}
    for g in ("group1", "group2"):
        block = doc[g]
        for field in ("layers", "reference", "discriminative"):
            if field not in block:
                raise ValidationError(f"truth file {path}: missing field '{g}.{field}'")
        out[g] = {
            "layers": np.asarray(block["layers"], dtype=int),
            "reference": np.asarray(block["reference"], dtype=int),
            "discriminative": np.asarray(block["discriminative"], dtype=bool),
        }
    return out
