"""
Scattering coefficients
=======================

Coefficients U|psi_jk ... |psi_j1 x|| over all scale paths of length < m,
flattened breadth-first.
"""

# %%
import numpy as np
import diffscat as ds
from diffscat.experiments import gen_sbm
from diffscat.scattering import coefficients_to_csv

rng = np.random.default_rng(1)
g, labels = gen_sbm(40, 2, 0.5, 0.05, rng)
op = ds.lazy_diffusion(g)
J = ds.max_scale(op.beta)
bank = ds.build_bank(op, J)
cfg = ds.ScatteringConfig(layers=3, scales=J)

x = rng.standard_normal(g.n)
c = ds.scatter(op, bank, x, cfg)
print(len(c), "coefficients;", "J =", J)
print(list(c.tree.items())[:6])

# %%
# Orders 0, 1, 2 and the norm bound sqrt(m) ||x||.
for k in range(3):
    print(k, np.linalg.norm(c.order(k)))
print(ds.scattering_norm(c), np.sqrt(3) * np.linalg.norm(x))

# %%
# Relabel the graph and the signal: nothing changes.
p = rng.permutation(g.n)
op_p = ds.lazy_diffusion(ds.permute_graph(g, p))
c_p = ds.scatter(op_p, ds.build_bank(op_p, J), ds.permutation_matrix(p) @ x, cfg)
print("distance after relabeling", ds.representation_distance(c, c_p))

# %%
# Batched features, one row per signal, as CSV.
xs = rng.standard_normal((g.n, 3))
feats = ds.scatter_features(op, bank, xs, 2)
print(coefficients_to_csv(feats, 2, J))

# %%
# A diffusion GNN: x <- |x theta1 + T^(2^(j-1)) x theta2|.
layers = tuple((rng.standard_normal((2, 2)) * 0.5, rng.standard_normal((2, 2)) * 0.5)
               for _ in range(3))
params = ds.GnnParams(layers)
out = ds.gnn_forward(op, rng.standard_normal((g.n, 2)), params)
print(out.shape, params.norms())
