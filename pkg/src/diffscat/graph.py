"""Weighted undirected graphs, lazy diffusion operators and node permutations.

Everything here is dense numpy; the intended scale is a few thousand nodes at
most, where a full symmetric eigendecomposition is cheap.
"""
from __future__ import annotations

import io
import os

import numpy as np

from .errors import (
    AsymmetricInputError,
    DisconnectedGraphError,
    EigenFailure,
    IsolatedNodeError,
    NegativeWeightError,
    NotSymmetricError,
    ParseError,
    SelfLoopError,
    SizeMismatchError,
)

__all__ = [
    "Graph",
    "DiffusionOperator",
    "build_graph",
    "graph_from_weights",
    "normalized_adjacency",
    "lazy_diffusion",
    "spectral_gap",
    "permute_graph",
    "permutation_matrix",
    "as_permutation",
    "inverse_permutation",
    "operator_norm_sym",
    "read_edge_list",
    "write_edge_list",
]

DISCONNECTED_TOL = 1e-8


def _frozen(a):
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


class Graph:
    """Symmetric, nonnegatively weighted graph without isolated nodes.

    Use :func:`build_graph` or :func:`graph_from_weights` rather than calling
    the constructor directly; both validate the invariants.
    """

    __slots__ = ("_weights",)

    def __init__(self, weights):
        self._weights = _frozen(weights)

    @property
    def weights(self):
        return self._weights

    @property
    def n(self):
        return self._weights.shape[0]

    @property
    def degrees(self):
        return self._weights.sum(axis=1)

    def edges(self):
        """Undirected edges ``(i, j, w)`` with ``i <= j``, lexicographically sorted."""
        iu, ju = np.nonzero(np.triu(self._weights))
        return [(int(i), int(j), float(self._weights[i, j])) for i, j in zip(iu, ju)]

    def __eq__(self, other):
        return isinstance(other, Graph) and np.array_equal(self._weights, other._weights)

    def __hash__(self):
        return hash(self._weights.tobytes())

    def __repr__(self):
        return f"Graph(n={self.n}, edges={len(self.edges())})"


def graph_from_weights(weights, allow_self_loops=False):
    """Validate a dense weight matrix and wrap it in a :class:`Graph`."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise SizeMismatchError(f"weight matrix must be square, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ParseError("weight matrix contains non-finite entries")
    if np.any(w < 0):
        raise NegativeWeightError("edge weights must be nonnegative")
    if not np.array_equal(w, w.T):
        raise AsymmetricInputError("weight matrix is not symmetric")
    if not allow_self_loops and np.any(np.diag(w) != 0):
        raise SelfLoopError("self-loops present; pass allow_self_loops=True to accept them")
    deg = w.sum(axis=1)
    zero = np.flatnonzero(deg <= 0)
    if zero.size:
        raise IsolatedNodeError(int(zero[0]))
    return Graph(w)


def build_graph(n, edges, allow_self_loops=False):
    """Build a graph on ``n`` nodes from ``(i, j, w)`` triples.

    Each undirected edge may be listed once, or twice as ``(i, j)`` and
    ``(j, i)`` with identical weights.

    Raises
    ------
    IsolatedNodeError
        If some node ends up with zero degree.
    AsymmetricInputError
        If ``(i, j)`` and ``(j, i)`` are both given with different weights,
        or the same ordered edge is repeated.
    NegativeWeightError
        If a weight is not strictly positive.
    """
    n = int(n)
    if n < 1:
        raise SizeMismatchError("graph needs at least one node")
    w = np.zeros((n, n))
    seen = {}
    for i, j, wt in edges:
        i, j, wt = int(i), int(j), float(wt)
        if not (0 <= i < n and 0 <= j < n):
            raise SizeMismatchError(f"edge ({i}, {j}) out of range for n={n}")
        if not wt > 0:
            raise NegativeWeightError(f"edge ({i}, {j}) has non-positive weight {wt}")
        if i == j and not allow_self_loops:
            raise SelfLoopError("self-loops present; pass allow_self_loops=True to accept them")
        if (i, j) in seen:
            raise AsymmetricInputError(f"duplicate edge ({i}, {j})")
        if (j, i) in seen:
            if seen[(j, i)] != wt:
                raise AsymmetricInputError(
                    f"edge ({j}, {i}) given with weights {seen[(j, i)]} and {wt}")
            seen[(i, j)] = wt
            continue
        seen[(i, j)] = wt
        w[i, j] = wt
        w[j, i] = wt
    return graph_from_weights(w, allow_self_loops=allow_self_loops)


def normalized_adjacency(g):
    """Return ``D^{-1/2} W D^{-1/2}``."""
    s = 1.0 / np.sqrt(g.degrees)
    a = g.weights * s[:, None] * s[None, :]
    return 0.5 * (a + a.T)


class DiffusionOperator:
    """Lazy diffusion ``T = (I + A) / 2`` with its eigendecomposition cached.

    Attributes
    ----------
    matrix : ndarray (n, n)
    eigenvalues : ndarray (n,)
        Sorted in descending order.
    eigenvectors : ndarray (n, n)
        Orthonormal columns matching ``eigenvalues``.
    beta : float
        ``max_{i>=1} |lambda_i(T)|``; this is the value used by every bound.
    beta_adjacency : float
        The same quantity measured on the spectrum of ``A``.
    sqrt_degree : ndarray (n,)
        ``d^{1/2} / ||d^{1/2}||``, the eigenvector for eigenvalue 1.
    """

    __slots__ = ("matrix", "eigenvalues", "eigenvectors", "beta", "beta_adjacency",
                 "sqrt_degree", "_powers")

    def __init__(self, matrix, eigenvalues, eigenvectors, beta, beta_adjacency, sqrt_degree):
        self.matrix = _frozen(matrix)
        self.eigenvalues = _frozen(eigenvalues)
        self.eigenvectors = _frozen(eigenvectors)
        self.beta = float(beta)
        self.beta_adjacency = float(beta_adjacency)
        self.sqrt_degree = _frozen(sqrt_degree)
        self._powers = [self.matrix]

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def gap(self):
        return 1.0 - self.beta

    def dyadic_power(self, j):
        """``T^(2^j)`` by ``j`` repeated squarings, memoized."""
        if j < 0:
            raise ValueError("scale index must be nonnegative")
        # memo only grows; the operator is otherwise immutable
        while len(self._powers) <= j:
            p = self._powers[-1] @ self._powers[-1]
            p = 0.5 * (p + p.T)
            p.flags.writeable = False
            self._powers.append(p)
        return self._powers[j]

    def spectral_power(self, r):
        """``T^r`` reconstructed from the eigendecomposition (cross-check path)."""
        lam = np.clip(self.eigenvalues, 0.0, None) ** r
        u = self.eigenvectors
        return (u * lam) @ u.T


def _fix_signs(vecs):
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def lazy_diffusion(g):
    a = normalized_adjacency(g)
    n = g.n
    t = 0.5 * (np.eye(n) + a)
    try:
        lam, u = np.linalg.eigh(t)
        lam_a = np.linalg.eigvalsh(a)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    order = np.argsort(lam)[::-1]
    lam = lam[order]
    u = _fix_signs(u[:, order])
    lam_a = np.sort(lam_a)[::-1]
    beta = float(np.max(np.abs(lam[1:]))) if n > 1 else 0.0
    beta_a = float(np.max(np.abs(lam_a[1:]))) if n > 1 else 0.0
    sd = np.sqrt(g.degrees)
    sd = sd / np.linalg.norm(sd)
    return DiffusionOperator(t, lam, u, beta, beta_a, sd)


def spectral_gap(op):
    """Return ``beta`` after checking that eigenvalue 1 is simple.

    Raises
    ------
    DisconnectedGraphError
        If the second eigenvalue of ``T`` is within 1e-8 of 1.
    """
    if op.n > 1 and op.eigenvalues[1] >= 1.0 - DISCONNECTED_TOL:
        raise DisconnectedGraphError("eigenvalue 1 of the diffusion operator is repeated")
    return op.beta


def as_permutation(p, n=None):
    p = np.asarray(p)
    if p.ndim != 1 or not np.issubdtype(p.dtype, np.integer):
        raise SizeMismatchError("a permutation is a 1-d integer array")
    if n is not None and p.size != n:
        raise SizeMismatchError(f"permutation of size {p.size} applied to n={n}")
    if not np.array_equal(np.sort(p), np.arange(p.size)):
        raise SizeMismatchError("mapping is not a bijection on {0..n-1}")
    return p.astype(np.intp)


def inverse_permutation(p):
    p = as_permutation(p)
    inv = np.empty_like(p)
    inv[p] = np.arange(p.size)
    return inv


def permutation_matrix(p):
    """Matrix ``P`` with ``P[p[i], i] = 1``, so that ``(P x)[p[i]] = x[i]``."""
    p = as_permutation(p)
    m = np.zeros((p.size, p.size))
    m[p, np.arange(p.size)] = 1.0
    return m


def permute_graph(g, p):
    """Relabel node ``i`` as ``p[i]``: ``W'[p[i], p[j]] = W[i, j]``."""
    p = as_permutation(p, g.n)
    w = np.empty_like(g.weights)
    w[np.ix_(p, p)] = g.weights
    return Graph(w)


def operator_norm_sym(m, tol=1e-10):
    """Spectral norm of a symmetric matrix as its largest absolute eigenvalue."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {m.shape}")
    if m.size == 0:
        return 0.0
    if np.max(np.abs(m - m.T)) > tol:
        raise NotSymmetricError("matrix is not symmetric")
    lam = np.linalg.eigvalsh(0.5 * (m + m.T))
    return float(max(abs(lam[0]), abs(lam[-1])))


# -- edge-list text format ---------------------------------------------------

def read_edge_list(source):
    """Parse the ``n <count>`` / ``i j w`` edge-list format.

    ``source`` is a path or an open text stream.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source) as fh:
            return read_edge_list(fh)
    n = None
    edges = []
    for lineno, raw in enumerate(source, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError(f"line {lineno}: expected header 'n <count>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"line {lineno}: bad node count {parts[1]!r}") from None
            continue
        if len(parts) != 3:
            raise ParseError(f"line {lineno}: expected 'i j w'")
        try:
            edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError:
            raise ParseError(f"line {lineno}: cannot parse {line!r}") from None
    if n is None:
        raise ParseError("missing header 'n <count>'")
    return build_graph(n, edges, allow_self_loops=True)


def write_edge_list(g, dest=None):
    """Write ``g`` in edge-list format; returns the text when ``dest`` is None."""
    buf = io.StringIO()
    buf.write(f"n {g.n}\n")
    for i, j, w in g.edges():
        buf.write(f"{i} {j} {w!r}\n")
    text = buf.getvalue()
    if dest is None:
        return text
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w") as fh:
            fh.write(text)
    else:
        dest.write(text)
    return text
