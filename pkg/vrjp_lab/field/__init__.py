"""
Mixing field: density, tree polynomial, arborescence oracle and quadrature
"""

from .arborescence import (
    Arborescence,
    ArborescenceLaw,
    arborescence_law,
    enumerate_arborescences,
    tree_polynomial_enumerated,
)
from .density import (
    RatioBound,
    TiltedWeights,
    log_density,
    log_density_batch,
    log_tree_polynomial_derivatives,
    scaled_arc_weights,
    rn_ratio,
    symmetric_tree_matrix,
    tilted_weights,
    tree_polynomial,
    tree_polynomial_batch,
    tree_polynomial_cholesky,
    tree_polynomial_ratio_bound,
)
from .quadrature import (
    QuadratureResult,
    exp_moment_identity_oracle,
    exp_moment_oracle,
    grid_integral,
    marginal_cdf,
    normalization_oracle,
    quenched_first_step_oracle,
    tilted_moment_oracle,
)
from .sample import FieldSample

__all__ = [
    "Arborescence",
    "ArborescenceLaw",
    "FieldSample",
    "QuadratureResult",
    "RatioBound",
    "TiltedWeights",
    "arborescence_law",
    "enumerate_arborescences",
    "exp_moment_identity_oracle",
    "exp_moment_oracle",
    "grid_integral",
    "log_density",
    "log_density_batch",
    "log_tree_polynomial_derivatives",
    "marginal_cdf",
    "normalization_oracle",
    "scaled_arc_weights",
    "quenched_first_step_oracle",
    "rn_ratio",
    "symmetric_tree_matrix",
    "tilted_moment_oracle",
    "tilted_weights",
    "tree_polynomial",
    "tree_polynomial_batch",
    "tree_polynomial_cholesky",
    "tree_polynomial_enumerated",
    "tree_polynomial_ratio_bound",
]
