"""Wiener-Hopf solvers: classical causal-part method and prediction-based deconvolution."""

from .prediction import (
    MultistepCoeffs,
    concurrent_from_twosided,
    m_step_filter,
    multistep_coeffs,
    phi_tail,
    twosided_from_cross_covariance,
)
from .rhs import build_rhs, rhs_array, rhs_cross_cov_shift, rhs_unit
from .sequences import BiSeq, CausalSeq, TwoSidedSeq, anticausal_part, causal_part
from .solvers import (
    FilterSolution,
    ResidualReport,
    conjugate_product,
    g_minus,
    normal_equation_values,
    prediction_numerator,
    solve_wh_classical,
    solve_wh_prediction,
    verify_normal_equations,
)

__all__ = [
    "BiSeq",
    "CausalSeq",
    "FilterSolution",
    "MultistepCoeffs",
    "ResidualReport",
    "TwoSidedSeq",
    "anticausal_part",
    "build_rhs",
    "causal_part",
    "concurrent_from_twosided",
    "conjugate_product",
    "g_minus",
    "m_step_filter",
    "multistep_coeffs",
    "normal_equation_values",
    "phi_tail",
    "prediction_numerator",
    "rhs_array",
    "rhs_cross_cov_shift",
    "rhs_unit",
    "solve_wh_classical",
    "solve_wh_prediction",
    "twosided_from_cross_covariance",
    "verify_normal_equations",
]
