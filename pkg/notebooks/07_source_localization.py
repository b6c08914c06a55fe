"""
Source localization on a stochastic block model
===============================================

Which community did a diffused impulse start in? Linear classifiers on raw
signals, GFT coefficients and scattering features, then the same models on
an edge-dropped copy of the graph.
"""

# %%
from diffscat.experiments import (
    ExperimentSpec, average_results, classification_csv, run_source_localization)

spec = ExperimentSpec(generator="sbm", signal="diffusion_source", n=120, communities=4,
                      p_in=0.6, p_out=0.05, n_train=400, n_test=100, perturb_grid=(0.0, 0.1))
runs = [run_source_localization(spec.replace(seed=s)) for s in range(5)]
avg = average_results(runs)
print(classification_csv(avg))

# %%
acc = {(r.representation, r.m, r.perturb_p): r.accuracy for r in avg}
for kind, m in [("raw", 0), ("gft", 0), ("scattering", 2), ("scattering", 3), ("scattering", 4)]:
    clean, pert = acc[kind, m, 0.0], acc[kind, m, 0.1]
    print(f"{kind:10s} m={m}  clean {clean:.3f}  dropped {pert:.3f}  change {pert - clean:+.3f}")
