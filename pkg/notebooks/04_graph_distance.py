"""
Diffusion distance between graphs
=================================

min over relabelings of || T_G - P^T T_G' P ||. Exact for n <= 8 by
enumeration; the heuristic gives an upper bound at any size.
"""

# %%
import numpy as np
import diffscat as ds

k3 = ds.build_graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
k3b = ds.build_graph(3, [(0, 1, 2), (1, 2, 1), (0, 2, 1)])
res = ds.diffusion_distance(k3, k3b)
print(res)

# %%
rng = np.random.default_rng(3)
w = np.triu(rng.uniform(0.5, 1.5, (7, 7)) * (rng.random((7, 7)) < 0.6), 1)
w[np.arange(6), np.arange(1, 7)] = 1.0
g = ds.graph_from_weights(w + w.T)
p = rng.permutation(7)
h = ds.permute_graph(g, p)
r = ds.diffusion_distance(g, h)
print(r.value, r.permutation, p)    # the relabeling is recovered

# %%
# Perturb the weights and compare the three modes.
noise = np.triu(1 + rng.uniform(-0.3, 0.3, (7, 7)), 1)
h2 = ds.permute_graph(ds.graph_from_weights(g.weights * (noise + noise.T)), p)
for mode in ("exact", "heuristic", "identity"):
    print(mode, ds.diffusion_distance(g, h2, mode=mode).value)

# %%
# Other integer 2s are allowed.
print(ds.diffusion_distance(g, h2, s=1.0).value, ds.diffusion_distance(g, h2, s=2.0).value)

# %%
# Gromov-Hausdorff distance between the diffusion metric spaces.
print(ds.gromov_hausdorff(g, h), ds.gromov_hausdorff(g, h2))
