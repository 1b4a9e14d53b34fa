"""Multistep prediction coefficients and the filters built from them."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..covmodel import (
    CovarianceSequence,
    SpectralGrid,
    WoldFactorization,
    default_grid_size,
    eval_spectral_density,
    transfer_on_grid,
)
from .sequences import CausalSeq, TwoSidedSeq
from .solvers import FilterSolution, _package


@dataclass(frozen=True, eq=False)
class MultistepCoeffs:
    """phi_j(ell): coefficient of X_{-j} in the best ell-step ahead predictor."""

    ell: int
    values: np.ndarray


def multistep_coeffs(wold: WoldFactorization, ell: int, out_len: int) -> MultistepCoeffs:
    """phi_j(ell) = sum_{s=1}^{ell} phi_{j+s} psi_{ell-s}, j = 0..out_len-1."""

    if ell < 1:
        raise ValueError("prediction horizon must be at least 1")
    phi_full = wold.phi_padded(out_len + ell + 1)
    values = np.zeros(out_len)
    for s in range(1, ell + 1):
        weight = wold.psi[ell - s] if ell - s < wold.psi.size else 0.0
        if weight:
            values += weight * phi_full[s : s + out_len]
    return MultistepCoeffs(ell=ell, values=values)


def phi_tail(wold: WoldFactorization, ell: int, grid: SpectralGrid) -> np.ndarray:
    """Samples of phi_ell(omega) = sum_{s>=1} phi_{ell+s} e^{isw}; zero for ell >= L_w."""

    if ell < 0:
        raise ValueError("ell must be non-negative")
    length = wold.truncation_length
    if ell >= length:
        return np.zeros(grid.n_grid, dtype=complex)
    coeffs = np.zeros(length - ell + 1)
    coeffs[1:] = wold.phi[ell:]
    return transfer_on_grid(coeffs, grid.n_grid)


def m_step_filter(
    wold: WoldFactorization,
    m: int,
    grid: SpectralGrid,
    *,
    out_len: Optional[int] = None,
    cov: Optional[CovarianceSequence] = None,
) -> FilterSolution:
    """H_m = phi [psi e^{-imw}]_+ : the m-step ahead predictor of X_m from X_0, X_-1, ...

    Coefficients are only exact while m + j <= L_w, so the default length is
    L_w - m + 1.
    """

    if m < 1:
        raise ValueError("prediction horizon must be at least 1")
    started = time.perf_counter()
    valid = max(wold.truncation_length - m + 1, 1)
    shifted = wold.psi[m:] if m < wold.psi.size else np.zeros(1)
    full = np.convolve(wold.phi_tilde, shifted)[:valid]

    implied = cov if cov is not None else wold.implied_acf(2 * valid + m)
    g = CausalSeq(implied.at(np.arange(valid) + m))
    return _package(full, g, wold, grid, "prediction", started, cov, out_len or valid, None)


def concurrent_from_twosided(
    a: TwoSidedSeq, wold: WoldFactorization, out_len: int
) -> CausalSeq:
    """h_j = a_{-j} + sum_{l>=1} a_l phi_j(l), where a_l weights X_l in the two-sided filter."""

    h = np.zeros(out_len)
    half = a.half_width
    for j in range(min(half, out_len - 1) + 1):
        h[j] += a.at(-j)
    for ell in range(1, half + 1):
        weight = a.at(ell)
        if weight:
            h += weight * multistep_coeffs(wold, ell, out_len).values
    return CausalSeq(h)


def twosided_from_cross_covariance(
    cross_cov: TwoSidedSeq,
    cov: CovarianceSequence,
    half_width: int,
    n_grid: Optional[int] = None,
) -> TwoSidedSeq:
    """Two-sided filter with sum_r c_YX(r) e^{irw} / f(w) as transfer function.

    ``cross_cov.at(r)`` is cov(Y, X_{-r}); the result's ``at(j)`` weights X_j.
    """

    span = max(cross_cov.half_width, cov.truncation_length, half_width)
    n = n_grid or default_grid_size(span)
    density = eval_spectral_density(cov, n)

    wrapped = np.zeros(n)
    for r in range(-cross_cov.half_width, cross_cov.half_width + 1):
        wrapped[r % n] += cross_cov.at(r)
    ratio = n * np.fft.ifft(wrapped) / density.values
    coeffs = np.real(np.fft.fft(ratio)) / n

    values = np.array([coeffs[(-j) % n] for j in range(-half_width, half_width + 1)])
    return TwoSidedSeq(values)
