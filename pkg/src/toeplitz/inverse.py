"""Rows and entries of T(f)^-1 and T_n(f)^-1 from prediction coefficients."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_solve

from config.settings import settings

from ..covmodel import (
    SpectralGrid,
    WoldFactorization,
    acf_from_ma_kernel,
    coefficients_from_grid,
    conjugate_transfer_on_grid,
    exp_on_grid,
    levinson_durbin,
    wold_from_covariance,
)
from ..errors import TruncationError
from ..wh_core import phi_tail, prediction_numerator, rhs_unit
from .dense import ToeplitzSpec, _factor

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class InverseRow:
    k: int
    values: np.ndarray


@dataclass(frozen=True, eq=False)
class InverseACF:
    """gamma(k): Fourier coefficients of 1/f."""

    gamma: np.ndarray

    def at(self, lags: np.ndarray) -> np.ndarray:
        lags = np.abs(np.asarray(lags, dtype=int))
        out = np.zeros(lags.shape)
        inside = lags < self.gamma.size
        out[inside] = self.gamma[lags[inside]]
        return out


@dataclass(frozen=True, eq=False)
class FiniteInverseTerm:
    value: float
    tail_bound: float
    window: int


def inverse_row(wold: WoldFactorization, k: int, out_len: Optional[int] = None) -> InverseRow:
    """d_{k,j} = sigma^-2 [phi * (e_k - sum_{s=1}^{k} phi_s e_{k-s})]_j."""

    if k < 0:
        raise ValueError("row index must be non-negative")
    shifted = prediction_numerator(rhs_unit(k), wold)
    full = np.convolve(wold.phi_tilde, shifted) / wold.sigma2
    length = full.size if out_len is None else out_len
    values = np.zeros(length)
    keep = min(length, full.size)
    values[:keep] = full[:keep]
    return InverseRow(k=k, values=values)


def inverse_row_grid(
    wold: WoldFactorization, k: int, grid: SpectralGrid, out_len: Optional[int] = None
) -> InverseRow:
    """Same row from D_k = (e^{ikw} + psi^* phi_k^*) / f on the grid."""

    n = grid.n_grid
    numerator = exp_on_grid(k, n) + conjugate_transfer_on_grid(wold.psi, n) * np.conj(
        phi_tail(wold, k, grid)
    )
    length = wold.truncation_length + k + 1 if out_len is None else out_len
    return InverseRow(k=k, values=coefficients_from_grid(numerator / wold.density_on(n), length))


def inverse_acf(wold: WoldFactorization, max_lag: int) -> InverseACF:
    """gamma(k) = sigma^-2 sum_s phi~_s phi~_{s+|k|} with phi~ = (1, -phi_1, ...)."""

    acf = acf_from_ma_kernel(wold.phi_tilde, 1.0 / wold.sigma2, max_lag)
    return InverseACF(gamma=acf.values)


def finite_predictor_coefficients(spec: ToeplitzSpec, ells: np.ndarray) -> np.ndarray:
    """Column l holds the coefficients of X_0, ..., X_-(n-1) in the projection of X_{-l}.

    Targets inside the window are returned as exact unit vectors; the rest
    solve T_n a = (c(m - l))_m.
    """

    ells = np.asarray(ells, dtype=int)
    rows = np.arange(spec.n)
    rhs = spec.cov.at(rows[:, None] - ells[None, :])
    factor, _ = _factor(spec)
    coeffs = cho_solve(factor, rhs, check_finite=False)
    inside = (ells >= 0) & (ells < spec.n)
    coeffs[:, inside] = 0.0
    coeffs[ells[inside], np.flatnonzero(inside)] = 1.0
    return coeffs


def _window(wold: WoldFactorization, window: Optional[int]) -> int:
    return settings.window_factor * wold.truncation_length if window is None else window


def _outside_window_sum(
    spec: ToeplitzSpec,
    rows: Sequence[int],
    cols: Sequence[int],
    wold: WoldFactorization,
    width: int,
    tolerance: float,
) -> Tuple[np.ndarray, float]:
    """Block of d^(n) with the tail bound of the truncated l-sum.

    The bound adds |phi_k(l) gamma(j - l)| over the outer quarter of each
    extension [-M, -1] and [n, n - 1 + M]; the largest entry is reported.
    """

    ells = np.arange(-width, spec.n + width)
    predictors = finite_predictor_coefficients(spec, ells)[np.asarray(rows, dtype=int)]
    gamma = inverse_acf(wold, spec.n - 1 + width)
    weights = gamma.at(np.asarray(cols, dtype=int)[None, :] - ells[:, None])
    block = predictors @ weights

    tail = 0.0
    if width:
        edge = max(width // 4, 1)
        outer = np.r_[np.arange(edge), np.arange(ells.size - edge, ells.size)]
        bound = np.abs(predictors[:, outer]) @ np.abs(weights[outer, :])
        tail = float(np.max(bound))
    if tail > tolerance:
        raise TruncationError(
            f"l-sum tail bound {tail:.3g} exceeds {tolerance:.3g} (window M={width})",
            tail_bound=tail,
            tolerance=tolerance,
        )
    return block, tail


def finite_inverse_entry(
    spec: ToeplitzSpec,
    k: int,
    j: int,
    *,
    wold: Optional[WoldFactorization] = None,
    window: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> FiniteInverseTerm:
    """d^(n)_{k,j} = sum_l phi^(n)_k(l) gamma(j - l), l in [-M, n - 1 + M]."""

    n = spec.n
    if not (0 <= k < n and 0 <= j < n):
        raise ValueError(f"entry ({k}, {j}) outside a {n}x{n} matrix")
    wold = wold or wold_from_covariance(spec.cov)
    width = _window(wold, window)
    tol = settings.window_tail_tolerance if tolerance is None else tolerance
    block, tail = _outside_window_sum(spec, [k], [j], wold, width, tol)
    return FiniteInverseTerm(value=float(block[0, 0]), tail_bound=tail, window=width)


def finite_inverse_matrix(
    spec: ToeplitzSpec,
    *,
    rows: Optional[Sequence[int]] = None,
    cols: Optional[Sequence[int]] = None,
    wold: Optional[WoldFactorization] = None,
    window: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> np.ndarray:
    """Rows x cols block of T_n^-1 by the outside-window formula (all of it by default)."""

    n = spec.n
    rows = range(n) if rows is None else rows
    cols = range(n) if cols is None else cols
    if any(not 0 <= r < n for r in rows) or any(not 0 <= c < n for c in cols):
        raise ValueError(f"requested entries fall outside a {n}x{n} matrix")
    wold = wold or wold_from_covariance(spec.cov)
    width = _window(wold, window)
    tol = settings.window_tail_tolerance if tolerance is None else tolerance
    block, tail = _outside_window_sum(spec, list(rows), list(cols), wold, width, tol)
    logger.debug("finite inverse n=%s M=%s tail=%s", n, width, tail)
    return block


def finite_inverse_levinson(spec: ToeplitzSpec) -> np.ndarray:
    """T_n^-1 = A' D^-1 A from the predictors inside the window.

    Row k of A is the order-k prediction-error filter (A[k, k] = 1,
    A[k, k - j] = -phi_{k,j}); D holds the innovation variances sigma_k^2.
    """

    n = spec.n
    fit = levinson_durbin(spec.cov.extended(n - 1), n - 1)
    errors = np.eye(n)
    for k in range(1, n):
        errors[k, :k] = -fit.order_coeffs(k)[::-1]
    return errors.T @ (errors / fit.sigma_path[:n, None])
