import numpy as np
import pytest

from diffscat import build_graph, graph_from_weights


def random_connected(rng, n, density=0.5, weighted=True):
    """Erdos-Renyi graph with a random spanning path so it is always connected."""
    mask = np.triu(rng.random((n, n)) < density, 1)
    order = rng.permutation(n)
    mask[np.minimum(order[:-1], order[1:]), np.maximum(order[:-1], order[1:])] = True
    w = np.where(mask, rng.uniform(0.5, 2.0, (n, n)) if weighted else 1.0, 0.0)
    return graph_from_weights(w + w.T)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def k3():
    return build_graph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


@pytest.fixture
def p2():
    return build_graph(2, [(0, 1, 1.0)])
