"""Dyadic diffusion wavelets and their frame bounds.

The bank for a lazy diffusion ``T`` is

    psi_0 = I - T,   psi_j = T^(2^(j-1)) - T^(2^j)  (j >= 1),

and every ``psi_j`` acts on the ``i``-th eigenvector of ``T`` as multiplication by
``p_j(lambda_i)``. The frame polynomial ``Q_J = sum_j p_j^2`` therefore gives the
exact energy captured by the bank along each eigendirection.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import BetaOutOfRangeError, SizeMismatchError
from .graph import spectral_gap

__all__ = [
    "WaveletBank",
    "FrameReport",
    "dyadic_power",
    "max_scale",
    "build_bank",
    "apply_bank",
    "wavelet_polynomial",
    "frame_polynomial",
    "frame_bounds",
]


def dyadic_power(op, j):
    """``T^(2^j)`` computed by ``j`` repeated squarings of ``op.matrix``."""
    return op.dyadic_power(int(j))


def max_scale(beta):
    """Number of wavelet scales matched to the spectral gap.

    ``J = 1 + ceil(log2(-1 / log2(beta)))``, clamped below at 1 so that the
    finest wavelet ``I - T`` is always present.
    """
    if not 0.0 < beta < 1.0:
        raise BetaOutOfRangeError(f"beta must lie in (0, 1), got {beta}")
    r_star = -1.0 / math.log2(beta)
    return max(1, 1 + math.ceil(math.log2(r_star)))


@dataclass(frozen=True, eq=False)
class WaveletBank:
    matrices: tuple
    source_beta: float

    @property
    def scales(self):
        return len(self.matrices)

    @property
    def n(self):
        return self.matrices[0].shape[0]

    def stacked(self):
        """The bank as a single ``(J*n, n)`` analysis operator."""
        return np.vstack(self.matrices)


def build_bank(op, J):
    """Build ``J`` wavelets from the cached dyadic powers of ``op``."""
    J = int(J)
    if J < 1:
        raise ValueError("a wavelet bank needs J >= 1")
    eye = np.eye(op.n)
    mats = [eye - op.matrix]
    for j in range(1, J):
        m = dyadic_power(op, j - 1) - dyadic_power(op, j)
        mats.append(m)
    for m in mats:
        m.flags.writeable = False
    return WaveletBank(tuple(mats), op.beta)


def apply_bank(bank, x):
    """Return the list ``[psi_j @ x for j in range(J)]``."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] != bank.n:
        raise SizeMismatchError(f"signal has length {x.shape[0]}, graph has {bank.n} nodes")
    return [m @ x for m in bank.matrices]


def wavelet_polynomial(x, j):
    """Spectral response ``p_j`` of the ``j``-th wavelet."""
    x = np.asarray(x, dtype=float)
    if j == 0:
        return 1.0 - x
    r = 2 ** (j - 1)
    return x ** r - x ** (2 * r)


def frame_polynomial(x, J):
    """``Q_J(x) = sum_{j<J} p_j(x)^2``; vectorized over ``x``."""
    return sum(wavelet_polynomial(x, j) ** 2 for j in range(int(J)))


@dataclass(frozen=True)
class FrameReport:
    lower_empirical: float
    upper_empirical: float
    lower_analytic: float
    beta: float
    scales: int

    FIELDS = ("C1", "C2", "analytic_floor", "beta", "J")

    def as_row(self):
        return (self.lower_empirical, self.upper_empirical, self.lower_analytic,
                self.beta, self.scales)

    def to_csv(self, header=True):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(self.FIELDS)
        w.writerow([_fmt(v) for v in self.as_row()])
        return buf.getvalue()


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def frame_bounds(op, J):
    """Frame constants of the ``J``-scale bank on the complement of ``sqrt_degree``.

    Raises
    ------
    DisconnectedGraphError
        If the graph is disconnected, in which case no lower bound exists.
    """
    beta = spectral_gap(op)
    lam = op.eigenvalues[1:]
    if lam.size == 0:
        return FrameReport(1.0, 1.0, (1.0 - beta) ** 2, beta, int(J))
    q = frame_polynomial(np.clip(lam, 0.0, 1.0), J)
    return FrameReport(float(q.min()), float(q.max()), (1.0 - beta) ** 2, beta, int(J))
