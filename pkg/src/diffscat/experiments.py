"""Random graph models, signal synthesis and the two experiment runners.

Every runner derives one independent random stream per trial from the master
seed via ``numpy.random.SeedSequence([seed, *trial_index])``, so outputs are
reproducible and independent of the order in which trials are evaluated.
"""
from __future__ import annotations

import csv
import dataclasses
import io
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import GenerationFailedError, IndexOutOfRangeError, SizeMismatchError
from .graph import Graph, lazy_diffusion
from .linear import train_linear
from .scattering import feature_dim, scatter_features
from .wavelets import build_bank, max_scale

__all__ = [
    "ExperimentSpec",
    "TrialResult",
    "ring_lattice_degree",
    "gen_small_world",
    "gen_sbm",
    "perturb_edge_drop",
    "source_signal",
    "gft",
    "gaussian_signals",
    "representation_features",
    "run_stability_curve",
    "run_source_localization",
    "average_results",
    "load_spec",
    "parse_config",
    "stability_csv",
    "classification_csv",
    "STABILITY_FIELDS",
    "CLASSIFICATION_FIELDS",
]

MAX_ATTEMPTS = 100


def _stream(seed, *idx):
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, idx)]))


def _is_connected(w):
    return connected_components(w != 0, directed=False)[0] == 1


# -- generators --------------------------------------------------------------

def ring_lattice_degree(n, p):
    """Neighbors per node for edge probability ``p``: ``round(p (n-1))``, even, >= 2."""
    k = int(round(p * (n - 1)))
    if k >= n - 1:
        return n - 1
    return max(2, k - k % 2)


def gen_small_world(n, p, q, rng):
    """Watts-Strogatz graph on ``n`` nodes with unit weights.

    Starts from a ring lattice where each node links to its ``k/2`` nearest
    neighbors on either side (``k`` from :func:`ring_lattice_degree`), then
    moves the far endpoint of each lattice edge with probability ``q`` to a
    uniformly chosen node, skipping moves that would create a self-loop or a
    duplicate edge. Resampled until connected.
    """
    if not 0 < p <= 1 or not 0 <= q <= 1:
        raise ValueError(f"need 0 < p <= 1 and 0 <= q <= 1, got p={p}, q={q}")
    rng = np.random.default_rng(rng)
    k = ring_lattice_degree(n, p)
    if k == n - 1:
        w = np.ones((n, n)) - np.eye(n)
        return Graph(w)
    for _ in range(MAX_ATTEMPTS):
        w = np.zeros((n, n), dtype=bool)
        for s in range(1, k // 2 + 1):
            idx = np.arange(n)
            w[idx, (idx + s) % n] = True
            w[(idx + s) % n, idx] = True
        if q > 0:
            for s in range(1, k // 2 + 1):
                for i in range(n):
                    j = (i + s) % n
                    if rng.random() >= q or not w[i, j]:
                        continue
                    u = int(rng.integers(n))
                    if u == i or w[i, u]:
                        continue
                    w[i, j] = w[j, i] = False
                    w[i, u] = w[u, i] = True
        if _is_connected(w) and w.any(axis=1).all():
            return Graph(w.astype(float))
    raise GenerationFailedError(f"no connected small-world graph after {MAX_ATTEMPTS} attempts")


def gen_sbm(n, communities, p_in, p_out, rng):
    """Stochastic block model with unit weights; returns ``(graph, labels)``.

    Block sizes are ``n // communities`` with the remainder spread over the
    first blocks. Resampled until connected.
    """
    if not 0 <= p_out <= p_in <= 1:
        raise ValueError(f"need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}")
    if not 1 <= communities <= n:
        raise ValueError("need 1 <= communities <= n")
    rng = np.random.default_rng(rng)
    sizes = np.full(communities, n // communities)
    sizes[: n % communities] += 1
    labels = np.repeat(np.arange(communities), sizes)
    prob = np.where(labels[:, None] == labels[None, :], p_in, p_out)
    for _ in range(MAX_ATTEMPTS):
        upper = np.triu(rng.random((n, n)) < prob, 1)
        w = (upper | upper.T).astype(float)
        if _is_connected(w):
            return Graph(w), labels
    raise GenerationFailedError(f"no connected SBM sample after {MAX_ATTEMPTS} attempts")


def perturb_edge_drop(g, p, rng):
    """Remove each edge independently with probability ``p``.

    Resampled until no node is isolated.
    """
    if not 0 <= p < 1:
        raise ValueError(f"need 0 <= p < 1, got {p}")
    if p == 0:
        return g
    rng = np.random.default_rng(rng)
    n = g.n
    for _ in range(MAX_ATTEMPTS):
        keep = np.triu(rng.random((n, n)) >= p, 1)
        keep = keep | keep.T
        w = np.where(keep, g.weights, 0.0)
        w[np.diag_indices(n)] = np.diag(g.weights)
        if np.all(w.sum(axis=1) > 0):
            return Graph(w)
    raise GenerationFailedError(f"edge drop left isolated nodes in {MAX_ATTEMPTS} attempts")


# -- signals and linear representations ---------------------------------------

def source_signal(g, source, t, rng=None):
    """Diffused impulse ``(W / lambda_max(W))^t delta_source``.

    ``rng`` is unused; it is accepted so all signal generators share a signature.
    """
    if not 0 <= source < g.n:
        raise IndexOutOfRangeError(f"source {source} outside 0..{g.n - 1}")
    t = int(t)
    if t < 1:
        raise ValueError("diffusion time must be >= 1")
    w = g.weights
    lam = np.linalg.eigvalsh(w)[-1]
    x = np.zeros(g.n)
    x[source] = 1.0
    m = w / lam
    for _ in range(t):
        x = m @ x
    return x


def _source_signals(g, sources, times):
    """Batch of diffused impulses, one column per ``(source, time)`` pair."""
    w = g.weights
    m = w / np.linalg.eigvalsh(w)[-1]
    out = np.zeros((g.n, len(sources)))
    cur = np.eye(g.n)
    for t in range(1, int(np.max(times)) + 1):
        cur = m @ cur
        sel = np.flatnonzero(times == t)
        out[:, sel] = cur[:, sources[sel]]
    return out


def gft(op, x):
    """Coefficients of ``x`` in the eigenbasis of ``T`` (descending eigenvalue)."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != op.n:
        raise SizeMismatchError(f"signal has length {x.shape[0]}, graph has {op.n} nodes")
    return op.eigenvectors.T @ x


def gaussian_signals(n, count, rng):
    """``count`` standard Gaussian signals normalized to unit norm, as columns."""
    x = rng.standard_normal((n, count))
    return x / np.linalg.norm(x, axis=0)


# -- experiment configuration ---------------------------------------------------

def _floats(v):
    if isinstance(v, str):
        return tuple(float(s) for s in v.replace(",", " ").split())
    return tuple(float(s) for s in v)


def _ints(v):
    if isinstance(v, str):
        return tuple(int(s) for s in v.replace(",", " ").split())
    return tuple(int(s) for s in v)


@dataclass(frozen=True)
class ExperimentSpec:
    """Declarative description of a stability-curve or source-localization run.

    Defaults reproduce the desk-scale settings; the full-size small-world
    run uses ``n=200, n_graphs=50, n_signals=1000``.
    """

    generator: str = "small_world"
    n: int = 100
    p_grid: tuple = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    q_sw: float = 0.1
    communities: int = 4
    p_in: float = 0.6
    p_out: float = 0.05
    perturbation: str = "regenerate"
    perturb_grid: tuple = (0.0, 0.1)
    signal: str = "gaussian"
    t_max: int = 20
    layers: tuple = (2, 3, 4)
    n_graphs: int = 10
    n_signals: int = 50
    n_train: int = 400
    n_test: int = 100
    reg: float = 1e-4
    epochs: int = 30
    seed: int = 0

    _CONVERT = {
        "p_grid": _floats, "perturb_grid": _floats, "layers": _ints,
    }

    def __post_init__(self):
        for name, conv in self._CONVERT.items():
            object.__setattr__(self, name, conv(getattr(self, name)))
        for name in ("n", "communities", "t_max", "n_graphs", "n_signals", "n_train",
                     "n_test", "epochs", "seed"):
            object.__setattr__(self, name, int(getattr(self, name)))
        for name in ("q_sw", "p_in", "p_out", "reg"):
            object.__setattr__(self, name, float(getattr(self, name)))
        probs = (*self.p_grid, *self.perturb_grid, self.q_sw, self.p_in, self.p_out)
        if any(not 0 <= p <= 1 for p in probs):
            raise ValueError("probabilities must lie in [0, 1]")
        if min(self.n_graphs, self.n_signals, self.n_train, self.n_test, self.t_max) < 1:
            raise ValueError("trial counts must be >= 1")
        if self.generator not in ("small_world", "sbm"):
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.perturbation not in ("regenerate", "edge_drop"):
            raise ValueError(f"unknown perturbation {self.perturbation!r}")
        if self.signal not in ("gaussian", "diffusion_source"):
            raise ValueError(f"unknown signal model {self.signal!r}")
        if any(m < 1 for m in self.layers):
            raise ValueError("scattering depth must be >= 1")

    def replace(self, **kw):
        return dataclasses.replace(self, **kw)


def parse_config(text):
    """Parse ``key=value`` lines (``#`` comments, blank lines ignored)."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def load_spec(path=None, overrides=None, base=None):
    """Build an :class:`ExperimentSpec` from a config file plus overrides."""
    values = {}
    if path is not None:
        with open(os.fspath(path)) as fh:
            values.update(parse_config(fh.read()))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {f.name for f in dataclasses.fields(ExperimentSpec)}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    return dataclasses.replace(base or ExperimentSpec(), **values)


@dataclass(frozen=True)
class TrialResult:
    """One row of experiment output.

    The stability curve fills ``p_sw``, ``beta``, ``m`` and the distance
    statistics; source localization fills ``representation``, ``m``,
    ``perturb_p`` and ``accuracy``.
    """

    beta: float = float("nan")
    rep_distance_mean: float = float("nan")
    rep_distance_var: float = float("nan")
    accuracy: float = float("nan")
    p_sw: float = float("nan")
    m: int = 0
    representation: str = "scattering"
    perturb_p: float = 0.0
    n_graphs: int = 0
    n_signals: int = 0
    n_train: int = 0
    n_test: int = 0
    seed: int = 0
    extra: dict = field(default_factory=dict, compare=False)


STABILITY_FIELDS = ("p_sw", "beta", "m", "mean_dist", "var_dist", "n_graphs", "n_signals")
CLASSIFICATION_FIELDS = ("representation", "m", "perturb_p", "accuracy", "n_train", "n_test")


def _num(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def stability_csv(results):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STABILITY_FIELDS)
    for r in results:
        w.writerow([_num(r.p_sw), _num(r.beta), _num(r.m), _num(r.rep_distance_mean),
                    _num(r.rep_distance_var), _num(r.n_graphs), _num(r.n_signals)])
    return buf.getvalue()


def classification_csv(results):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CLASSIFICATION_FIELDS)
    for r in results:
        w.writerow([r.representation, _num(r.m), _num(r.perturb_p), _num(r.accuracy),
                    _num(r.n_train), _num(r.n_test)])
    return buf.getvalue()


# -- runners ---------------------------------------------------------------------

def _scales_for(op):
    # a complete graph can have beta exactly 0.5 or below; max_scale needs (0, 1)
    return max_scale(op.beta) if 0.0 < op.beta < 1.0 else 1


def run_stability_curve(spec):
    """Representation distance between two small-world realizations vs. beta.

    For each ``p`` in ``spec.p_grid``: one base graph ``G``, ``spec.n_graphs``
    perturbed graphs ``G'`` and ``spec.n_signals`` unit Gaussian signals shared
    by all ``G'``. The per-graph estimate is the mean distance over signals;
    each output row reports the mean and (population) variance of these
    estimates across ``G'`` for one depth ``m``.
    """
    if spec.generator != "small_world":
        raise ValueError("the stability curve uses the small-world generator")
    m_max = max(spec.layers)
    results = []
    for pi, p in enumerate(spec.p_grid):
        g = gen_small_world(spec.n, p, spec.q_sw, _stream(spec.seed, pi, 0))
        op = lazy_diffusion(g)
        J = _scales_for(op)
        bank = build_bank(op, J)
        x = gaussian_signals(spec.n, spec.n_signals, _stream(spec.seed, pi, 1))
        base = scatter_features(op, bank, x, m_max)
        per_graph = {m: [] for m in spec.layers}
        for gi in range(spec.n_graphs):
            rng = _stream(spec.seed, pi, 2, gi)
            if spec.perturbation == "regenerate":
                g2 = gen_small_world(spec.n, p, spec.q_sw, rng)
            else:
                g2 = perturb_edge_drop(g, spec.perturb_grid[-1], rng)
            op2 = lazy_diffusion(g2)
            feats = scatter_features(op2, build_bank(op2, J), x, m_max)
            for m in spec.layers:
                dim = feature_dim(m, J)
                dist = np.linalg.norm(base[:, :dim] - feats[:, :dim], axis=1)
                per_graph[m].append(dist.mean())
        for m in spec.layers:
            vals = np.asarray(per_graph[m])
            results.append(TrialResult(
                beta=op.beta, rep_distance_mean=float(vals.mean()),
                rep_distance_var=float(vals.var()), p_sw=p, m=m,
                n_graphs=spec.n_graphs, n_signals=spec.n_signals, seed=spec.seed,
                extra={"J": J}))
    return results


def representation_features(kind, op, bank, signals, m=None):
    """Features (one row per signal column) for ``raw``, ``gft`` or ``scattering``."""
    if kind == "raw":
        return np.asarray(signals, dtype=float).T.copy()
    if kind == "gft":
        return gft(op, signals).T
    if kind == "scattering":
        return scatter_features(op, bank, signals, m)
    raise ValueError(f"unknown representation {kind!r}")


def run_source_localization(spec):
    """Classify the community of a diffusion source from its observed signal.

    Training and clean test signals are diffused on the SBM graph ``G``.
    Each representation is trained on features computed with ``G``; for
    each ``p`` in ``spec.perturb_grid`` the test features are recomputed with
    the operator of an edge-dropped copy of ``G`` (``p = 0`` is ``G`` itself)
    while the observed signals stay the same. The scattering scale count is
    fixed from ``G`` so feature dimensions agree across graphs.
    """
    if spec.generator != "sbm" or spec.signal != "diffusion_source":
        raise ValueError("source localization needs generator=sbm, signal=diffusion_source")
    g, labels = gen_sbm(spec.n, spec.communities, spec.p_in, spec.p_out,
                        _stream(spec.seed, 0))
    op = lazy_diffusion(g)
    J = _scales_for(op)
    bank = build_bank(op, J)

    def draw(count, stream):
        src = stream.integers(spec.n, size=count)
        times = stream.integers(1, spec.t_max + 1, size=count)
        return _source_signals(g, src, times), labels[src]

    x_train, y_train = draw(spec.n_train, _stream(spec.seed, 1))
    x_test, y_test = draw(spec.n_test, _stream(spec.seed, 2))

    reps = [("raw", 0), ("gft", 0)] + [("scattering", m) for m in spec.layers]
    models = {}
    for ri, (kind, m) in enumerate(reps):
        feats = representation_features(kind, op, bank, x_train, m)
        models[kind, m] = train_linear(feats, y_train, spec.reg, spec.epochs,
                                       _stream(spec.seed, 3, ri))
    results = []
    for pj, p in enumerate(spec.perturb_grid):
        g2 = perturb_edge_drop(g, p, _stream(spec.seed, 4, pj))
        op2 = op if g2 is g else lazy_diffusion(g2)
        bank2 = bank if g2 is g else build_bank(op2, J)
        for kind, m in reps:
            feats = representation_features(kind, op2, bank2, x_test, m)
            acc = models[kind, m].accuracy(feats, y_test)
            results.append(TrialResult(
                beta=op.beta, accuracy=acc, m=m, representation=kind, perturb_p=p,
                n_train=spec.n_train, n_test=spec.n_test, seed=spec.seed,
                extra={"J": J}))
    return results


def average_results(runs):
    """Average ``accuracy`` over repeated runs with identical row layouts."""
    runs = [list(r) for r in runs]
    if not runs:
        return []
    out = []
    for rows in zip(*runs):
        first = rows[0]
        keys = {(r.representation, r.m, r.perturb_p) for r in rows}
        if len(keys) != 1:
            raise ValueError("runs do not share the same row layout")
        out.append(dataclasses.replace(
            first, accuracy=float(np.mean([r.accuracy for r in rows])),
            beta=float(np.mean([r.beta for r in rows])),
            extra={"accuracies": [r.accuracy for r in rows]}))
    return out
