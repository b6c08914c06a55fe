"""Diffusion scattering coefficients and the diffusion GNN forward pass."""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ShapeMismatchError, SizeMismatchError

__all__ = [
    "ScatteringConfig",
    "ScatteringCoefficients",
    "GnnParams",
    "low_pass",
    "scatter",
    "scatter_features",
    "scattering_paths",
    "path_label",
    "feature_dim",
    "scattering_norm",
    "representation_distance",
    "order_slices",
    "gnn_forward",
    "coefficients_to_csv",
]


@dataclass(frozen=True)
class ScatteringConfig:
    """``layers`` counts coefficient orders ``k = 0..layers-1``; ``scales`` is J."""

    layers: int
    scales: int

    def __post_init__(self):
        if self.layers < 1 or self.scales < 1:
            raise ValueError("layers and scales must both be >= 1")


def scattering_paths(layers, scales):
    """All scale paths, breadth-first by order then lexicographic."""
    paths = []
    for k in range(layers):
        paths.extend(itertools.product(range(scales), repeat=k))
    return paths


def feature_dim(layers, scales):
    return sum(scales ** k for k in range(layers))


def order_slices(layers, scales):
    """Slices of the flattened vector holding each order ``k``."""
    out, start = [], 0
    for k in range(layers):
        size = scales ** k
        out.append(slice(start, start + size))
        start += size
    return out


def path_label(path):
    return f"{len(path)}:" + ".".join(str(j) for j in path)


@dataclass(frozen=True, eq=False)
class ScatteringCoefficients:
    flattened: np.ndarray
    layers: int
    scales: int

    @property
    def paths(self):
        return scattering_paths(self.layers, self.scales)

    @property
    def tree(self):
        return dict(zip(self.paths, self.flattened.tolist()))

    def __getitem__(self, path):
        return self.tree[tuple(path)]

    def __len__(self):
        return self.flattened.size

    def order(self, k):
        return self.flattened[order_slices(self.layers, self.scales)[k]]


def low_pass(op, x):
    """Degree-weighted average ``<sqrt_degree, x>``."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != op.n:
        raise SizeMismatchError(f"signal has length {x.shape[0]}, graph has {op.n} nodes")
    return op.sqrt_degree @ x


def scatter_features(op, bank, signals, layers):
    """Scattering features for a batch of signals.

    Parameters
    ----------
    signals : ndarray, shape (n,) or (n, N)
        One signal per column.
    layers : int
        Number of coefficient orders.

    Returns
    -------
    ndarray, shape (N, feature_dim(layers, J))
    """
    x = np.asarray(signals, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n, N = x.shape
    if n != op.n or bank.n != op.n:
        raise SizeMismatchError(f"signal has length {n}, graph has {op.n} nodes")
    J = bank.scales
    stacked = bank.stacked()
    v = op.sqrt_degree
    frontier = x[:, :, None]  # (n, N, F), F paths of the current order
    blocks = [v @ x]
    for _ in range(1, layers):
        F = frontier.shape[2]
        y = stacked @ frontier.reshape(n, N * F)  # (J*n, N*F)
        y = np.abs(y.reshape(J, n, N, F))
        frontier = y.transpose(1, 2, 3, 0).reshape(n, N, F * J)
        blocks.append(np.einsum("i,ijk->jk", v, frontier))
    return np.concatenate([b.reshape(N, -1) for b in blocks], axis=1)


def scatter(op, bank, x, cfg):
    """Scattering coefficients of one signal, ``U |psi_jk ... |psi_j1 x||``."""
    if cfg.scales != bank.scales:
        raise ShapeMismatchError(f"config has J={cfg.scales}, bank has J={bank.scales}")
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise SizeMismatchError("scatter takes a single 1-d signal")
    flat = scatter_features(op, bank, x, cfg.layers)[0]
    flat.flags.writeable = False
    return ScatteringCoefficients(flat, cfg.layers, cfg.scales)


def scattering_norm(c):
    return float(np.linalg.norm(c.flattened))


def representation_distance(c1, c2):
    if (c1.layers, c1.scales) != (c2.layers, c2.scales):
        raise ShapeMismatchError(
            f"(m, J) = {(c1.layers, c1.scales)} vs {(c2.layers, c2.scales)}")
    return float(np.linalg.norm(c1.flattened - c2.flattened))


def coefficients_to_csv(rows, layers, scales, header=True):
    """CSV text with one row per coefficient vector, columns labeled ``k:j1.j2...``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        w.writerow([path_label(p) for p in scattering_paths(layers, scales)])
    for r in rows:
        flat = r.flattened if isinstance(r, ScatteringCoefficients) else np.asarray(r)
        w.writerow([format(float(v), ".17g") for v in flat])
    return buf.getvalue()


@dataclass(frozen=True)
class GnnParams:
    """Per-layer weights ``[(theta1, theta2), ...]``; layer ``j`` maps d_j -> d_{j+1}."""

    layers: tuple

    def __post_init__(self):
        layers = tuple((np.asarray(a, float), np.asarray(b, float)) for a, b in self.layers)
        for j, (a, b) in enumerate(layers):
            if a.ndim != 2 or a.shape != b.shape:
                raise DimensionMismatchError(f"layer {j + 1}: theta1 {a.shape} vs theta2 {b.shape}")
            if j > 0 and layers[j - 1][0].shape[1] != a.shape[0]:
                raise DimensionMismatchError(
                    f"layer {j} outputs {layers[j - 1][0].shape[1]} features, "
                    f"layer {j + 1} expects {a.shape[0]}")
        object.__setattr__(self, "layers", layers)

    @property
    def depth(self):
        return len(self.layers)

    def norms(self):
        """Spectral norms ``(||theta1||, ||theta2||)`` per layer."""
        return [(float(np.linalg.norm(a, 2)), float(np.linalg.norm(b, 2)))
                for a, b in self.layers]


def gnn_forward(op, x, params):
    """Apply ``x <- |x theta1 + T^(2^(j-1)) x theta2|`` for layers ``j = 1..J``."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] != op.n:
        raise DimensionMismatchError(f"features have {x.shape[0]} rows, graph has {op.n} nodes")
    for j, (t1, t2) in enumerate(params.layers, start=1):
        if x.shape[1] != t1.shape[0]:
            raise DimensionMismatchError(
                f"layer {j} expects {t1.shape[0]} input features, got {x.shape[1]}")
        x = np.abs(x @ t1 + op.dyadic_power(j - 1) @ x @ t2)
    return x
