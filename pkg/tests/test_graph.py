"""Graph construction, normalized adjacency, lazy diffusion and edge-list I/O."""
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_connected
from diffscat import (
    AsymmetricInputError,
    DisconnectedGraphError,
    IsolatedNodeError,
    NegativeWeightError,
    NotSymmetricError,
    ParseError,
    SizeMismatchError,
    build_graph,
    graph_from_weights,
    inverse_permutation,
    lazy_diffusion,
    normalized_adjacency,
    operator_norm_sym,
    permutation_matrix,
    permute_graph,
    read_edge_list,
    spectral_gap,
    write_edge_list,
)


def test_build_k3(k3):
    assert k3.n == 3
    np.testing.assert_array_equal(k3.degrees, [2, 2, 2])


def test_build_p2(p2):
    np.testing.assert_array_equal(p2.degrees, [1, 1])


def test_isolated_node():
    with pytest.raises(IsolatedNodeError) as exc:
        build_graph(3, [(0, 1, 1.0)])
    assert exc.value.node == 2


def test_asymmetric_input():
    with pytest.raises(AsymmetricInputError):
        build_graph(2, [(0, 1, 1.0), (1, 0, 2.0)])
    # both directions with the same weight are fine
    g = build_graph(2, [(0, 1, 1.5), (1, 0, 1.5)])
    assert g.weights[0, 1] == 1.5


def test_negative_weight():
    with pytest.raises(NegativeWeightError):
        build_graph(2, [(0, 1, -1.0)])
    with pytest.raises(NegativeWeightError):
        graph_from_weights([[0, -1], [-1, 0]])


def test_weights_read_only(k3):
    with pytest.raises(ValueError):
        k3.weights[0, 1] = 5.0


def test_normalized_adjacency_k3(k3):
    # D = 2I so A = W/2
    expected = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]]) / 2.0
    np.testing.assert_allclose(normalized_adjacency(k3), expected, atol=1e-15)


def test_normalized_adjacency_p2(p2):
    np.testing.assert_allclose(normalized_adjacency(p2), [[0, 1], [1, 0]])


def test_normalized_adjacency_star():
    star = build_graph(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    a = normalized_adjacency(star)
    expected = np.zeros((4, 4))
    expected[0, 1:] = expected[1:, 0] = 1 / np.sqrt(3)
    np.testing.assert_allclose(a, expected, atol=1e-15)


def test_lazy_diffusion_k3(k3):
    op = lazy_diffusion(k3)
    np.testing.assert_allclose(op.matrix, np.full((3, 3), 0.25) + 0.25 * np.eye(3), atol=1e-15)
    np.testing.assert_allclose(op.eigenvalues, [1, 0.25, 0.25], atol=1e-12)
    assert op.beta == pytest.approx(0.25, abs=1e-12)
    np.testing.assert_allclose(op.sqrt_degree, np.ones(3) / np.sqrt(3))


def test_lazy_diffusion_p2(p2):
    op = lazy_diffusion(p2)
    np.testing.assert_allclose(op.matrix, np.full((2, 2), 0.5))
    np.testing.assert_allclose(op.eigenvalues, [1, 0], atol=1e-15)
    assert op.beta == pytest.approx(0.0, abs=1e-15)
    # A has eigenvalues +-1: bipartite, beta_A = 1 while beta_T = 0
    assert op.beta_adjacency == pytest.approx(1.0)


def test_spectral_gap(k3, p2):
    assert spectral_gap(lazy_diffusion(k3)) == pytest.approx(0.25)
    assert spectral_gap(lazy_diffusion(p2)) == pytest.approx(0.0, abs=1e-15)
    tri = [(0, 1, 1), (1, 2, 1), (0, 2, 1)]
    two = build_graph(6, tri + [(i + 3, j + 3, w) for i, j, w in tri])
    with pytest.raises(DisconnectedGraphError):
        spectral_gap(lazy_diffusion(two))


def test_operator_norm_examples():
    assert operator_norm_sym(np.eye(3)) == pytest.approx(1.0)
    assert operator_norm_sym(np.zeros((3, 3))) == 0.0
    assert operator_norm_sym([[0, 1], [1, 0]]) == pytest.approx(1.0)
    with pytest.raises(NotSymmetricError):
        operator_norm_sym([[0, 1], [0, 0]])


def test_operator_norm_vs_power_iteration(rng):
    for _ in range(20):
        m = rng.standard_normal((10, 10))
        m = m + m.T
        x = rng.standard_normal(10)
        for _ in range(5000):
            x = m @ (m @ x)
            x /= np.linalg.norm(x)
        est = np.sqrt(np.linalg.norm(m @ (m @ x)))
        assert operator_norm_sym(m) == pytest.approx(est, abs=1e-6)


def test_permute_identity_and_k3(k3, rng):
    assert permute_graph(k3, [0, 1, 2]) == k3
    for _ in range(5):
        assert permute_graph(k3, rng.permutation(3)) == k3


def test_permute_path():
    path = build_graph(3, [(0, 1, 1), (1, 2, 1)])
    swapped = permute_graph(path, [2, 1, 0])
    assert sorted(swapped.degrees) == sorted(path.degrees)
    assert swapped == path


def test_permute_size_mismatch(k3):
    with pytest.raises(SizeMismatchError):
        permute_graph(k3, [0, 1])


def test_permutation_helpers(rng):
    p = rng.permutation(7)
    q = inverse_permutation(p)
    np.testing.assert_array_equal(p[q], np.arange(7))
    P = permutation_matrix(p)
    x = rng.standard_normal(7)
    y = P @ x
    np.testing.assert_array_equal(y[p], x)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 25))
def test_spectrum_in_unit_interval(seed, n):
    rng = np.random.default_rng(seed)
    op = lazy_diffusion(random_connected(rng, n, density=rng.uniform(0.05, 1.0)))
    assert op.eigenvalues.min() >= -1e-10
    assert op.eigenvalues.max() <= 1 + 1e-10
    np.testing.assert_allclose(op.matrix @ op.sqrt_degree, op.sqrt_degree, atol=1e-10)
    a = normalized_adjacency(random_connected(rng, n))
    assert operator_norm_sym(a) <= 1 + 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 25))
def test_permute_conjugates_operator(seed, n):
    rng = np.random.default_rng(seed)
    g = random_connected(rng, n)
    p = rng.permutation(n)
    P = permutation_matrix(p)
    t2 = lazy_diffusion(permute_graph(g, p)).matrix
    np.testing.assert_allclose(t2, P @ lazy_diffusion(g).matrix @ P.T, atol=1e-12, rtol=0)


def test_dyadic_power_matches_spectral(rng):
    op = lazy_diffusion(random_connected(rng, 12))
    for j in range(5):
        np.testing.assert_allclose(op.dyadic_power(j), op.spectral_power(2 ** j), atol=1e-12)


def test_edge_list_round_trip(rng, tmp_path):
    g = random_connected(rng, 9)
    path = tmp_path / "g.txt"
    text = write_edge_list(g, path)
    assert text == path.read_text()
    assert read_edge_list(path) == g
    lines = text.splitlines()
    assert lines[0] == "n 9"
    pairs = [tuple(map(int, line.split()[:2])) for line in lines[1:]]
    assert pairs == sorted(pairs)
    assert all(i < j for i, j in pairs)


def test_edge_list_comments_and_errors():
    g = read_edge_list(io.StringIO("# triangle\nn 3\n0 1 1  # first\n1 2 1\n\n0 2 1\n"))
    assert g.n == 3 and len(g.edges()) == 3
    with pytest.raises(ParseError):
        read_edge_list(io.StringIO("0 1 1\n"))
    with pytest.raises(ParseError):
        read_edge_list(io.StringIO("n 3\n0 1\n"))
    with pytest.raises(IsolatedNodeError):
        read_edge_list(io.StringIO("n 3\n0 1 1\n"))
