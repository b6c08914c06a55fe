"""
Graphs and the lazy diffusion operator
======================================

Build small graphs, look at the normalized adjacency and the lazy diffusion
T = (I + A)/2, and read off the spectral gap.
"""

# %%
import numpy as np
import diffscat as ds

np.set_printoptions(precision=4, suppress=True)

k3 = ds.build_graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
print(ds.normalized_adjacency(k3))   # W/2, since every degree is 2

# %%
# The lazy operator moves every eigenvalue of A from [-1, 1] into [0, 1].
op = ds.lazy_diffusion(k3)
print(op.matrix)
print(op.eigenvalues, "beta =", op.beta)

# %%
# A single edge is bipartite: A has eigenvalue -1, T maps it to 0.
p2 = ds.build_graph(2, [(0, 1, 1)])
op2 = ds.lazy_diffusion(p2)
print(op2.eigenvalues, "beta_T =", op2.beta, "beta_A =", op2.beta_adjacency)

# %%
# The top eigenvector is the normalized square-root degree vector.
star = ds.build_graph(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
ops = ds.lazy_diffusion(star)
print(ops.sqrt_degree, np.allclose(ops.matrix @ ops.sqrt_degree, ops.sqrt_degree))

# %%
# Relabeling nodes conjugates T by a permutation matrix.
p = np.array([2, 0, 3, 1])
P = ds.permutation_matrix(p)
t_perm = ds.lazy_diffusion(ds.permute_graph(star, p)).matrix
print(np.abs(t_perm - P @ ops.matrix @ P.T).max())

# %%
# Disconnected graphs have no spectral gap.
tri = [(0, 1, 1), (1, 2, 1), (0, 2, 1)]
two = ds.build_graph(6, tri + [(i + 3, j + 3, w) for i, j, w in tri])
try:
    ds.spectral_gap(ds.lazy_diffusion(two))
except ds.DisconnectedGraphError as exc:
    print("error:", exc)

# %%
# Edge lists round-trip through the text format used by the CLI.
text = ds.write_edge_list(star)
print(text)
print(ds.read_edge_list(text.splitlines()) == star)
