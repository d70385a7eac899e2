"""
Deformation bounds: harmonic potentials, resistance and the decay inequalities
"""

from .bounds import (
    ConvexityResult,
    Lemma1Report,
    TaylorScan,
    classify,
    convexity_check,
    holder_combination_check,
    lemma1_bound,
    lemma1_bound_check,
    lemma1_log_bound,
    taylor_grid_scan,
    taylor_remainder_check,
)
from .harmonic import (
    HarmonicReport,
    MonotonicityScan,
    current_flow_bound_check,
    divergence,
    effective_resistance,
    harmonic_report,
    inf_norm,
    nash_williams_sum,
    resistance_monotonicity_scan,
    solve_harmonic,
)
from .plan import (
    ASYMPTOTIC_C0,
    DeformationPlan,
    build_plan,
    conjugate_exponent,
    decay_exponent,
    gamma_tilde_optimum,
)

__all__ = [
    "ASYMPTOTIC_C0",
    "ConvexityResult",
    "DeformationPlan",
    "HarmonicReport",
    "Lemma1Report",
    "MonotonicityScan",
    "TaylorScan",
    "build_plan",
    "classify",
    "conjugate_exponent",
    "convexity_check",
    "current_flow_bound_check",
    "decay_exponent",
    "divergence",
    "effective_resistance",
    "gamma_tilde_optimum",
    "harmonic_report",
    "holder_combination_check",
    "inf_norm",
    "lemma1_bound",
    "lemma1_bound_check",
    "lemma1_log_bound",
    "nash_williams_sum",
    "resistance_monotonicity_scan",
    "solve_harmonic",
    "taylor_grid_scan",
    "taylor_remainder_check",
]
