"""Truncated Toeplitz systems: dense oracle, inverse rows and finite inverse entries."""

from .dense import (
    DenseSolve,
    ToeplitzSpec,
    cholesky_identity_residual,
    dense_inverse,
    lower_toeplitz,
    toeplitz_matrix,
    toeplitz_solve_truncated,
)
from .inverse import (
    FiniteInverseTerm,
    InverseACF,
    InverseRow,
    finite_inverse_entry,
    finite_inverse_levinson,
    finite_inverse_matrix,
    finite_predictor_coefficients,
    inverse_acf,
    inverse_row,
    inverse_row_grid,
)

__all__ = [
    "DenseSolve",
    "FiniteInverseTerm",
    "InverseACF",
    "InverseRow",
    "ToeplitzSpec",
    "cholesky_identity_residual",
    "dense_inverse",
    "finite_inverse_entry",
    "finite_inverse_levinson",
    "finite_inverse_matrix",
    "finite_predictor_coefficients",
    "inverse_acf",
    "inverse_row",
    "inverse_row_grid",
    "lower_toeplitz",
    "toeplitz_matrix",
    "toeplitz_solve_truncated",
]
