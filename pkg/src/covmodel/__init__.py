"""Covariance sequences, spectral densities and the Wold factorization."""

from .factorization import (
    ARFit,
    WoldFactorization,
    ar_fit_acf,
    invert_power_series,
    levinson_durbin,
    spectral_residual,
    wold_from_covariance,
)
from .grid import (
    SpectralGrid,
    coefficients_from_grid,
    conjugate_transfer_on_grid,
    default_grid_size,
    default_truncation,
    exp_on_grid,
    next_power_of_two,
    transfer_on_grid,
)
from .sequences import (
    CovarianceSequence,
    acf_from_arma,
    acf_from_ma_kernel,
    ar_spectral_radius,
    eval_spectral_density,
    expand_ma_kernel,
    tail_lag,
    validate_covariance,
)

__all__ = [
    "ARFit",
    "CovarianceSequence",
    "SpectralGrid",
    "WoldFactorization",
    "acf_from_arma",
    "acf_from_ma_kernel",
    "ar_fit_acf",
    "ar_spectral_radius",
    "coefficients_from_grid",
    "conjugate_transfer_on_grid",
    "default_grid_size",
    "default_truncation",
    "eval_spectral_density",
    "exp_on_grid",
    "expand_ma_kernel",
    "invert_power_series",
    "levinson_durbin",
    "next_power_of_two",
    "spectral_residual",
    "tail_lag",
    "transfer_on_grid",
    "validate_covariance",
    "wold_from_covariance",
]
