"""
Stability bounds on small graph pairs
=====================================

Measured differences next to their closed-form bounds, using exact distances.
"""

# %%
import numpy as np
import diffscat as ds
from diffscat.verification import check_pair, sample_pair

rng = np.random.default_rng(4)
g1, g2 = sample_pair(rng)
pc = check_pair(g1, g2, rng)
print("n", pc.n, "d", pc.report.d, "beta", pc.report.beta_min, pc.report.beta_max)
for name, meas, bound in pc.checks():
    print(f"{name:10s} {meas:.4g} <= {bound:.4g}")

# %%
# Closed forms on their own.
print(ds.bound_wavelet(0.1, 0.5))
print(ds.bound_scattering_order(2, 0.01, 0.5, 0.5))
print(ds.bound_scattering_total(3, 0.01, 0.5, 0.5), ds.scattering_total_asymptote(3, 0.01, 0.5))
print(ds.bound_gnn(0.1, 0.5, [(1.0, 1.0)]))

# %%
# The wavelet bound stops holding for small beta. On K3 against K3 with one
# doubled edge, psi_0 = I - T alone differs by d while the bound is smaller.
k3 = ds.build_graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
k3b = ds.build_graph(3, [(0, 1, 2), (1, 2, 1), (0, 2, 1)])
d = ds.diffusion_distance(k3, k3b).value
beta = max(ds.lazy_diffusion(k3).beta, ds.lazy_diffusion(k3b).beta)
psi_gap = ds.operator_norm_sym(ds.lazy_diffusion(k3).matrix - ds.lazy_diffusion(k3b).matrix)
print("d", d, "beta", beta, "measured", psi_gap, "bound", ds.bound_wavelet(d, beta))
