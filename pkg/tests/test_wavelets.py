"""Diffusion wavelet bank, frame polynomial and frame bounds."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_connected
from diffscat import (
    BetaOutOfRangeError,
    DisconnectedGraphError,
    SizeMismatchError,
    apply_bank,
    build_bank,
    build_graph,
    dyadic_power,
    frame_bounds,
    frame_polynomial,
    lazy_diffusion,
    max_scale,
    permutation_matrix,
    permute_graph,
)
from diffscat.wavelets import wavelet_polynomial

Q3_QUARTER = 0.5625 + 0.03515625 + 0.0034332275390625


def test_dyadic_power_examples(k3, p2):
    op = lazy_diffusion(k3)
    np.testing.assert_array_equal(dyadic_power(op, 0), op.matrix)
    t2 = lazy_diffusion(p2)
    np.testing.assert_allclose(dyadic_power(t2, 1), t2.matrix, atol=1e-15)
    lam = np.linalg.eigvalsh(dyadic_power(op, 2))
    np.testing.assert_allclose(sorted(lam), [0.00390625, 0.00390625, 1.0], atol=1e-14)


def test_max_scale():
    assert max_scale(0.9) == 4
    assert max_scale(0.25) == 1
    assert max_scale(0.5) == 1
    assert max_scale(0.99) == 8
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(BetaOutOfRangeError):
            max_scale(bad)


def test_build_bank_examples(k3, p2):
    bank = build_bank(lazy_diffusion(k3), 1)
    expected = np.full((3, 3), -0.25) + 0.75 * np.eye(3)
    np.testing.assert_allclose(bank.matrices[0], expected, atol=1e-15)
    bank = build_bank(lazy_diffusion(p2), 2)
    np.testing.assert_allclose(bank.matrices[0], [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(bank.matrices[1], 0.0, atol=1e-15)
    with pytest.raises(ValueError):
        build_bank(lazy_diffusion(k3), 0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 20), J=st.integers(1, 6))
def test_bank_invariants(seed, n, J):
    rng = np.random.default_rng(seed)
    op = lazy_diffusion(random_connected(rng, n))
    bank = build_bank(op, J)
    assert bank.scales == J
    np.testing.assert_allclose(bank.matrices[0], np.eye(n) - op.matrix, atol=1e-12)
    for j in range(1, J):
        ref = op.spectral_power(2 ** (j - 1)) - op.spectral_power(2 ** j)
        np.testing.assert_allclose(bank.matrices[j], ref, atol=1e-10)
    for m in bank.matrices:
        np.testing.assert_allclose(m, m.T, atol=1e-12)
        np.testing.assert_allclose(m @ op.sqrt_degree, 0.0, atol=1e-9)


def test_apply_bank_examples(k3):
    op = lazy_diffusion(k3)
    bank = build_bank(op, 3)
    out = apply_bank(bank, op.sqrt_degree)
    assert len(out) == 3
    np.testing.assert_allclose(out, 0.0, atol=1e-9)
    x = np.array([1.0, -1.0, 0.0]) / np.sqrt(2)
    norms = [float(y @ y) for y in apply_bank(bank, x)]
    np.testing.assert_allclose(norms, [0.5625, 0.03515625, 0.0034332275390625], atol=1e-12)
    np.testing.assert_array_equal(apply_bank(bank, np.zeros(3)), 0.0)
    with pytest.raises(SizeMismatchError):
        apply_bank(bank, np.zeros(4))


def test_frame_polynomial_examples():
    for J in range(1, 8):
        assert frame_polynomial(0.0, J) == 1.0
        assert frame_polynomial(1.0, J) == 0.0
    assert frame_polynomial(0.25, 3) == pytest.approx(Q3_QUARTER, abs=1e-15)


def test_frame_polynomial_recurrence():
    # Q(x^2) = Q(x) + 2x(1-x)^2 for the infinite sum; J = 40 truncates below 1e-12
    x = np.linspace(0.0, 0.99, 200)
    J = 40
    tail = wavelet_polynomial(x, J) ** 2
    assert tail.max() < 1e-12
    q, q2 = frame_polynomial(x, J), frame_polynomial(x ** 2, J)
    assert np.all(q2 >= q - 1e-12)
    np.testing.assert_allclose(q2, q + 2 * x * (1 - x) ** 2, atol=1e-10)


def test_frame_bounds_k3(k3):
    rep = frame_bounds(lazy_diffusion(k3), 3)
    assert rep.lower_empirical == pytest.approx(Q3_QUARTER, abs=1e-12)
    assert rep.upper_empirical == pytest.approx(Q3_QUARTER, abs=1e-12)
    assert rep.lower_analytic == pytest.approx(0.5625)
    assert rep.to_csv().splitlines()[0] == "C1,C2,analytic_floor,beta,J"


def test_frame_bounds_disconnected():
    tri = [(0, 1, 1), (1, 2, 1), (0, 2, 1)]
    two = build_graph(6, tri + [(i + 3, j + 3, w) for i, j, w in tri])
    with pytest.raises(DisconnectedGraphError):
        frame_bounds(lazy_diffusion(two), 2)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(3, 30))
def test_frame_report_ordering(seed, n):
    rng = np.random.default_rng(seed)
    op = lazy_diffusion(random_connected(rng, n, density=rng.uniform(0.05, 0.8)))
    J = max_scale(op.beta) if op.beta > 0 else 1
    rep = frame_bounds(op, J)
    assert rep.lower_analytic <= rep.lower_empirical + 1e-12
    assert rep.lower_empirical <= rep.upper_empirical <= 1 + 1e-10


def test_spectral_consistency(rng):
    op = lazy_diffusion(random_connected(rng, 15))
    bank = build_bank(op, 5)
    x = rng.standard_normal(15)
    coef = op.eigenvectors.T @ x
    for j, y in enumerate(apply_bank(bank, x)):
        spec = np.sum(wavelet_polynomial(op.eigenvalues, j) ** 2 * coef ** 2)
        assert y @ y == pytest.approx(spec, abs=1e-8)


def test_permutation_equivariance(rng):
    g = random_connected(rng, 11)
    p = rng.permutation(11)
    P = permutation_matrix(p)
    x = rng.standard_normal(11)
    b1 = build_bank(lazy_diffusion(g), 4)
    b2 = build_bank(lazy_diffusion(permute_graph(g, p)), 4)
    for y1, y2 in zip(apply_bank(b1, x), apply_bank(b2, P @ x)):
        np.testing.assert_allclose(y2, P @ y1, atol=1e-10)
