"""
Diffusion wavelets and frame bounds
===================================

psi_0 = I - T and psi_j = T^(2^(j-1)) - T^(2^j). On each eigenvector of T the
bank acts by the scalars p_j(lambda), so the captured energy is Q_J(lambda).
"""

# %%
import numpy as np
import diffscat as ds
from diffscat.experiments import gen_small_world
from diffscat.wavelets import wavelet_polynomial

rng = np.random.default_rng(0)
g = gen_small_world(60, 0.2, 0.1, rng)
op = ds.lazy_diffusion(g)
J = ds.max_scale(op.beta)
print("beta", op.beta, "J", J)

# %%
bank = ds.build_bank(op, J)
for j, m in enumerate(bank.matrices):
    print(j, np.abs(m @ op.sqrt_degree).max())   # every wavelet kills v

# %%
# Frame polynomial on a grid; Q_J(0) = 1, Q_J(1) = 0.
lam = np.linspace(0, 1, 11)
print(np.round(ds.frame_polynomial(lam, J), 4))

# %%
# Energy of random signals orthogonal to v sits between C1 and 1.
rep = ds.frame_bounds(op, J)
print(rep.to_csv())
x = rng.standard_normal((g.n, 1000))
x -= np.outer(op.sqrt_degree, op.sqrt_degree @ x)
ratio = np.sum((bank.stacked() @ x) ** 2, axis=0) / np.sum(x * x, axis=0)
print("energy ratio range", ratio.min(), ratio.max())

# %%
# The same energy through the spectrum.
c = op.eigenvectors.T @ x[:, 0]
spec = sum(wavelet_polynomial(op.eigenvalues, j) ** 2 * c ** 2 for j in range(J)).sum()
print(spec, np.sum((bank.stacked() @ x[:, 0]) ** 2))

# %%
# Larger beta asks for more scales.
for beta in (0.3, 0.5, 0.7, 0.9, 0.95, 0.99, 0.999):
    print(beta, ds.max_scale(beta))
