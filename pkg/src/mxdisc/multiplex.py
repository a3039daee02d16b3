"""Multiplex network data model, normalized Laplacians and the edge-list format.

A multiplex network is an ordered sequence of weighted, undirected layers over
one shared node set.  Adjacency matrices are dense ``float64`` arrays with
entries in ``[0, 1]`` and an empty diagonal.

Edge-list files hold one multiplex network::

    # nodes=4 layers=2
    0 0 1 1.0
    0 1 2
    1 2 3 0.5

Each data line is ``<layer> <src> <dst> [<weight>]`` with 0-based ids; the
weight defaults to 1.0 and every undirected edge is listed once.  Further
lines starting with ``#`` are comments.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, ValidationError

SYMMETRY_TOL = 1e-12

_HEADER = re.compile(r"^#\s*nodes\s*=\s*(\d+)\s+layers\s*=\s*(\d+)\s*$")


def validate_adjacency(a, *, name: str = "adjacency") -> np.ndarray:
    """Return ``a`` as a float array after checking the adjacency invariants.

    Raises
    ------
    ValidationError
        If the matrix is not square, not finite, not symmetric, has weights
        outside ``[0, 1]`` or a nonzero diagonal.  The message names the
        first offending entry.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValidationError(f"{name}: expected a non-empty square matrix, got shape {a.shape}")
    bad = ~np.isfinite(a)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValidationError(f"{name}: non-finite entry at ({i}, {j})")
    bad = (a < 0) | (a > 1)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise ValidationError(f"{name}: entry ({i}, {j}) = {float(a[i, j])!r} outside [0, 1]")
    asym = np.abs(a - a.T) > SYMMETRY_TOL
    if asym.any():
        i, j = np.argwhere(asym)[0]
        raise ValidationError(
            f"{name}: not symmetric at ({i}, {j}): {float(a[i, j])!r} != {float(a[j, i])!r}"
        )
    diag = np.flatnonzero(np.diag(a))
    if diag.size:
        i = diag[0]
        raise ValidationError(f"{name}: self-loop at ({i}, {i})")
    return a


@dataclass(frozen=True)
class MultiplexNetwork:
    """Ordered layers sharing one node set.

    The stored arrays are read-only copies, so a network can be shared
    freely between solver runs.
    """

    layers: tuple[np.ndarray, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise ValidationError("a multiplex network needs at least one layer")
        checked = []
        for idx, a in enumerate(layers):
            a = validate_adjacency(a, name=f"layer {idx}").copy()
            a.setflags(write=False)
            checked.append(a)
        n = checked[0].shape[0]
        for idx, a in enumerate(checked):
            if a.shape[0] != n:
                raise DimensionError(
                    f"layer {idx} has {a.shape[0]} nodes, layer 0 has {n}"
                )
        object.__setattr__(self, "layers", tuple(checked))

    @classmethod
    def from_layers(cls, layers: Iterable) -> "MultiplexNetwork":
        return cls(tuple(layers))

    @property
    def n(self) -> int:
        return self.layers[0].shape[0]

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    def __len__(self) -> int:
        return len(self.layers)

    def __iter__(self):
        return iter(self.layers)

    def __eq__(self, other):
        if not isinstance(other, MultiplexNetwork):
            return NotImplemented
        return len(self) == len(other) and all(
            a.shape == b.shape and np.array_equal(a, b) for a, b in zip(self, other)
        )

    __hash__ = None


def normalized_laplacian(a) -> np.ndarray:
    """Symmetric normalized Laplacian ``D^{-1/2} (D - A) D^{-1/2}``.

    Isolated nodes get a zero inverse square-root degree, so their row and
    column of the result are zero.
    """
    a = validate_adjacency(a)
    deg = a.sum(axis=1)
    inv_sqrt = np.zeros_like(deg)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    lap = -(inv_sqrt[:, None] * a * inv_sqrt[None, :])
    lap[np.diag_indices_from(lap)] += nz.astype(float)
    return 0.5 * (lap + lap.T)


def layer_laplacians(net: MultiplexNetwork) -> list[np.ndarray]:
    return [normalized_laplacian(a) for a in net.layers]


def laplacian_sum(net: MultiplexNetwork) -> np.ndarray:
    """Elementwise sum of the per-layer normalized Laplacians."""
    return np.sum(layer_laplacians(net), axis=0)


def check_same_nodes(net1: MultiplexNetwork, net2: MultiplexNetwork) -> int:
    if net1.n != net2.n:
        raise DimensionError(f"networks have different node counts: {net1.n} vs {net2.n}")
    return net1.n


# ---------------------------------------------------------------------------
# edge-list I/O


def parse_edgelist(text: str, *, source: str = "<string>") -> MultiplexNetwork:
    lines = text.splitlines()
    header = None
    body_start = 0
    for idx, line in enumerate(lines):
        if line.strip():
            header = _HEADER.match(line.strip())
            body_start = idx + 1
            break
    if header is None:
        raise ValidationError(f"{source}: missing header line '# nodes=<N> layers=<L>'")
    n, n_layers = int(header.group(1)), int(header.group(2))
    if n < 1 or n_layers < 1:
        raise ValidationError(f"{source}: header needs nodes >= 1 and layers >= 1")

    layers = np.zeros((n_layers, n, n))
    seen: set[tuple[int, int, int]] = set()
    for lineno, line in enumerate(lines[body_start:], start=body_start + 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) not in (3, 4):
            raise ValidationError(f"{source}:{lineno}: expected '<layer> <src> <dst> [<weight>]'")
        try:
            layer, src, dst = (int(p) for p in parts[:3])
            weight = float(parts[3]) if len(parts) == 4 else 1.0
        except ValueError as exc:
            raise ValidationError(f"{source}:{lineno}: {exc}") from None
        if not 0 <= layer < n_layers:
            raise ValidationError(f"{source}:{lineno}: layer id {layer} out of range")
        if not (0 <= src < n and 0 <= dst < n):
            raise ValidationError(f"{source}:{lineno}: node id out of range [0, {n})")
        if src == dst:
            raise ValidationError(f"{source}:{lineno}: self-loop on node {src}")
        if not (np.isfinite(weight) and 0.0 <= weight <= 1.0):
            raise ValidationError(f"{source}:{lineno}: weight {weight!r} outside [0, 1]")
        key = (layer, min(src, dst), max(src, dst))
        if key in seen:
            raise ValidationError(f"{source}:{lineno}: duplicate edge {key}")
        seen.add(key)
        layers[layer, src, dst] = layers[layer, dst, src] = weight
    return MultiplexNetwork(tuple(layers))


def read_edgelist(path) -> MultiplexNetwork:
    path = Path(path)
    return parse_edgelist(path.read_text(encoding="utf-8"), source=str(path))


def format_edgelist(net: MultiplexNetwork, comments: Sequence[str] = ()) -> str:
    out = [f"# nodes={net.n} layers={net.n_layers}"]
    out.extend(f"# {c}" for c in comments)
    for layer, a in enumerate(net.layers):
        rows, cols = np.nonzero(np.triu(a, 1))
        for i, j in zip(rows.tolist(), cols.tolist()):
            out.append(f"{layer} {i} {j} {a[i, j]:.17g}")
    return "\n".join(out) + "\n"


def write_edgelist(net: MultiplexNetwork, path, comments: Sequence[str] = ()) -> Path:
    path = Path(path)
    path.write_text(format_edgelist(net, comments), encoding="utf-8", newline="\n")
    return path
