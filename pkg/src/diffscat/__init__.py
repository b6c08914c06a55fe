"""Diffusion scattering transforms on graphs.

Diffusion wavelet filter banks, layered scattering coefficients, diffusion
distances between graphs and closed-form stability bounds, plus experiment
runners for the small-world stability curve and SBM source localization.
"""
from .errors import *  # noqa: F401,F403
from .graph import (
    DiffusionOperator,
    Graph,
    as_permutation,
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
from .metrics import (
    BoundReport,
    DistanceResult,
    bound_gnn,
    bound_lowpass,
    bound_scattering_order,
    bound_scattering_total,
    bound_wavelet,
    diffusion_distance,
    gromov_hausdorff,
    power_difference_check,
    scattering_total_asymptote,
)
from .scattering import (
    GnnParams,
    ScatteringCoefficients,
    ScatteringConfig,
    gnn_forward,
    low_pass,
    representation_distance,
    scatter,
    scatter_features,
    scattering_norm,
)
from .wavelets import (
    FrameReport,
    WaveletBank,
    apply_bank,
    build_bank,
    dyadic_power,
    frame_bounds,
    frame_polynomial,
    max_scale,
)

__version__ = "0.1.0"
