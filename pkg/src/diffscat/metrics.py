"""Distances between graphs and closed-form stability bounds.

The graph distance compares diffusion powers up to node relabeling,

    d(G, G') = min_P || T_G^(2s) - P^T T_G'^(2s) P ||,

with ``s = 1/2`` by default. Exact evaluation enumerates every permutation and
is capped at small ``n``; the heuristic is a local search that only ever
returns an upper bound.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BetaOutOfRangeError,
    NonIntegerPowerError,
    NormTooLargeError,
    SizeMismatchError,
    TooLargeForExactError,
)
from .graph import lazy_diffusion, operator_norm_sym

__all__ = [
    "EXACT_MAX_N",
    "DistanceResult",
    "BoundReport",
    "diffusion_power",
    "diffusion_distance",
    "aligned_distance",
    "node_distance_matrix",
    "gromov_hausdorff",
    "all_permutations",
    "wavelet_constant",
    "bound_wavelet",
    "bound_lowpass",
    "bound_scattering_order",
    "bound_scattering_total",
    "scattering_total_asymptote",
    "bound_gnn",
    "power_difference_check",
]

EXACT_MAX_N = 8
_BATCH = 5040


@dataclass(frozen=True)
class DistanceResult:
    value: float
    permutation: np.ndarray = field(repr=False)
    mode: str
    s: float = 0.5

    FIELDS = ("value", "mode", "s", "permutation")

    def as_row(self):
        return (format(self.value, ".17g"), self.mode, format(self.s, ".17g"),
                " ".join(str(int(i)) for i in self.permutation))


def _diffusion_exponent(s):
    r = 2.0 * float(s)
    ri = int(round(r))
    if ri < 1 or abs(r - ri) > 1e-12:
        raise NonIntegerPowerError(f"2s must be a positive integer, got 2s={r}")
    return ri


def diffusion_power(g, s=0.5):
    """``T_G^(2s)`` for a graph; ``2s`` must be a positive integer."""
    r = _diffusion_exponent(s)
    return np.linalg.matrix_power(lazy_diffusion(g).matrix, r)


def all_permutations(n):
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def _batched_norms(m1, m2, perms):
    """``|| m1 - m2[p][:, p] ||`` for every row ``p`` of ``perms``."""
    out = np.empty(len(perms))
    for start in range(0, len(perms), _BATCH):
        p = perms[start:start + _BATCH]
        diff = m1[None, :, :] - m2[p[:, :, None], p[:, None, :]]
        lam = np.linalg.eigvalsh(diff)
        out[start:start + _BATCH] = np.maximum(np.abs(lam[:, 0]), np.abs(lam[:, -1]))
    return out


def aligned_distance(m1, m2, p):
    """``|| m1 - m2[p][:, p] ||``: node ``i`` of the first graph matched to ``p[i]``."""
    p = np.asarray(p, dtype=np.intp)
    return operator_norm_sym(m1 - m2[np.ix_(p, p)])


def _check_exact(n, max_n):
    if n > max_n:
        raise TooLargeForExactError(
            f"exact search over {n}! permutations exceeds the cap n <= {max_n}; "
            "use mode='heuristic'")


def _heuristic(m1, m2, g1, g2, max_iter):
    n = m1.shape[0]
    ident = np.arange(n)
    # degree-rank matching: i-th smallest degree in g1 <-> i-th smallest in g2
    o1 = np.argsort(g1.degrees, kind="stable")
    o2 = np.argsort(g2.degrees, kind="stable")
    seeded = np.empty(n, dtype=np.intp)
    seeded[o1] = o2
    best_p, best = ident, aligned_distance(m1, m2, ident)
    val = aligned_distance(m1, m2, seeded)
    if val < best:
        best_p, best = seeded, val
    p = best_p.copy()
    evals = 0
    improved = True
    while improved and evals < max_iter:
        improved = False
        for a, b in itertools.combinations(range(n), 2):
            if evals >= max_iter:
                break
            p[a], p[b] = p[b], p[a]
            val = aligned_distance(m1, m2, p)
            evals += 1
            if val < best:
                best = val
                improved = True
                break
            p[a], p[b] = p[b], p[a]
    return best, p


def diffusion_distance(g1, g2, s=0.5, mode="exact", max_exact_n=EXACT_MAX_N):
    """Diffusion distance between two graphs of equal size.

    Parameters
    ----------
    mode : {"exact", "identity", "heuristic"}
        ``exact`` enumerates all ``n!`` relabelings (``n <= max_exact_n``),
        ``identity`` compares nodes in their given order, and ``heuristic``
        starts from the better of the identity and degree-rank matchings and
        applies first-improvement pairwise swaps until none helps (at most
        ``10 n^2`` swap evaluations).

    Returns
    -------
    DistanceResult
        ``permutation[i]`` is the node of ``g2`` matched to node ``i`` of ``g1``.
    """
    if g1.n != g2.n:
        raise SizeMismatchError(f"graphs have {g1.n} and {g2.n} nodes")
    n = g1.n
    m1 = diffusion_power(g1, s)
    m2 = diffusion_power(g2, s)
    if mode == "identity":
        p = np.arange(n)
        return DistanceResult(aligned_distance(m1, m2, p), p, mode, s)
    if mode == "exact":
        _check_exact(n, max_exact_n)
        perms = all_permutations(n)
        norms = _batched_norms(m1, m2, perms)
        k = int(np.argmin(norms))
        return DistanceResult(float(norms[k]), perms[k].copy(), mode, s)
    if mode == "heuristic":
        val, p = _heuristic(m1, m2, g1, g2, max_iter=10 * n * n)
        return DistanceResult(float(val), p, mode, s)
    raise ValueError(f"unknown mode {mode!r}")


def node_distance_matrix(g, s=0.5):
    """Pairwise node distances ``||T^s (delta_x - delta_y)||``.

    Uses ``||T^s u||^2 = u^T T^(2s) u``, so only the integer power ``T^(2s)``
    is needed.
    """
    m = diffusion_power(g, s)
    d = np.diag(m)
    sq = d[:, None] + d[None, :] - 2.0 * m
    return np.sqrt(np.clip(sq, 0.0, None))


def gromov_hausdorff(g1, g2, s=0.5, max_exact_n=EXACT_MAX_N):
    """``min_pi max_{x,y} |d_G(x, y) - d_G'(pi x, pi y)|`` by enumeration."""
    if g1.n != g2.n:
        raise SizeMismatchError(f"graphs have {g1.n} and {g2.n} nodes")
    _check_exact(g1.n, max_exact_n)
    d1 = node_distance_matrix(g1, s)
    d2 = node_distance_matrix(g2, s)
    perms = all_permutations(g1.n)
    best = np.inf
    for start in range(0, len(perms), _BATCH):
        p = perms[start:start + _BATCH]
        diff = np.abs(d1[None] - d2[p[:, :, None], p[:, None, :]])
        best = min(best, float(diff.max(axis=(1, 2)).min()))
    return best


# -- closed-form bounds ------------------------------------------------------

def _check_beta(*betas):
    for b in betas:
        if not 0.0 <= b < 1.0:
            raise BetaOutOfRangeError(f"beta must lie in [0, 1), got {b}")


def wavelet_constant(beta):
    """``sqrt(beta^2 (1 + beta^2) / (1 - beta^2)^3)``."""
    _check_beta(beta)
    b2 = beta * beta
    return math.sqrt(b2 * (1.0 + b2) / (1.0 - b2) ** 3)


def bound_wavelet(d, beta):
    """Upper bound on ``||Psi_G - Psi_G'||`` for two banks at distance ``d``."""
    return 2.0 * d * wavelet_constant(beta)


def bound_lowpass(d, beta_min):
    """Upper bound on ``min_P ||v - P v'||^2``: ``2 d / (1 - beta_min)``."""
    _check_beta(beta_min)
    return 2.0 * d / (1.0 - beta_min)


def bound_scattering_order(k, d, beta_min, beta_max):
    """Bound on the order-``k`` scattering operator difference (unit input)."""
    _check_beta(beta_min, beta_max)
    if beta_min > beta_max:
        raise BetaOutOfRangeError("beta_min must not exceed beta_max")
    return math.sqrt(2.0 * d / (1.0 - beta_min)) + k * wavelet_constant(beta_max) * d


def bound_scattering_total(m, d, beta_min, beta_max, x_norm=1.0):
    """Bound on ``||Phi_G(x) - Phi_G'(x)||`` over ``m`` coefficient orders."""
    if m < 1:
        raise ValueError("m must be >= 1")
    terms = [bound_scattering_order(k, d, beta_min, beta_max) for k in range(m)]
    return math.sqrt(sum(t * t for t in terms)) * x_norm


def scattering_total_asymptote(m, d, beta_min, x_norm=1.0):
    """Leading small-``d`` behavior ``sqrt(m d) ||x|| sqrt(2 / (1 - beta_min))``."""
    _check_beta(beta_min)
    return math.sqrt(m * d) * x_norm * math.sqrt(2.0 / (1.0 - beta_min))


def bound_gnn(d, beta, theta_norms, x_norm=1.0):
    """Bound on the output difference of a diffusion GNN on two graphs.

    ``theta_norms`` holds ``(||theta1||, ||theta2||)`` per layer.
    """
    _check_beta(beta)
    prod = 1.0
    for a, b in theta_norms:
        prod *= 1.0 + a + b
    return d * x_norm / (1.0 - beta) * prod ** 2


def power_difference_check(a, b, r):
    """Return ``(||a^r - b^r||, r beta^(r-1) ||a - b||)`` with ``beta = max norm``.

    Raises
    ------
    NormTooLargeError
        Unless both matrices have spectral norm strictly below 1.
    """
    r = int(r)
    if r < 1:
        raise ValueError("r must be >= 1")
    na, nb = operator_norm_sym(a), operator_norm_sym(b)
    beta = max(na, nb)
    if beta >= 1.0:
        raise NormTooLargeError(f"max(||a||, ||b||) = {beta} is not below 1")
    lhs = operator_norm_sym(np.linalg.matrix_power(a, r) - np.linalg.matrix_power(b, r))
    rhs = r * beta ** (r - 1) * operator_norm_sym(a - b)
    return lhs, rhs


@dataclass
class BoundReport:
    """Measured quantities next to their closed-form bounds for one graph pair."""

    d: float
    beta_min: float
    beta_max: float
    scales: int
    layers: int
    epsilon_psi: float
    epsilon_u: float
    per_order: list
    total: float
    measured_psi: float
    measured_u: float
    measured_per_order: list
    measured_total: float

    def checks(self):
        """``(name, measured, bound)`` triples for every inequality."""
        out = [("wavelet", self.measured_psi, self.epsilon_psi),
               ("lowpass", self.measured_u, self.epsilon_u)]
        for k, (meas, bd) in enumerate(zip(self.measured_per_order, self.per_order)):
            out.append((f"order_{k}", meas, bd))
        out.append(("total", self.measured_total, self.total))
        return out

    def violations(self, tol=1e-9):
        return [c for c in self.checks() if c[1] > c[2] + tol]

    def to_csv(self, header=True):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(["check", "measured", "bound", "d", "beta_min", "beta_max"])
        for name, meas, bd in self.checks():
            w.writerow([name, format(meas, ".17g"), format(bd, ".17g"),
                        format(self.d, ".17g"), format(self.beta_min, ".17g"),
                        format(self.beta_max, ".17g")])
        return buf.getvalue()
