"""Covariance sequences, model-based autocovariances and spectral densities."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from statsmodels.tsa.arima_process import ArmaProcess

from config.settings import settings

from ..errors import DomainError, NonCausalModelError, PositiveDefinitenessError
from .grid import SpectralGrid, default_grid_size, default_truncation

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CovarianceSequence:
    """Autocovariances c(0..L_c); c(-r) = c(r) and c(r) = 0 beyond L_c."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("covariance sequence must be a non-empty 1-d array")
        if not np.all(np.isfinite(values)):
            raise DomainError("covariance sequence contains non-finite values")
        if values[0] <= 0:
            raise DomainError(f"c(0) must be positive, got {values[0]!r}", c0=float(values[0]))
        worst = int(np.argmax(np.abs(values)))
        if abs(values[worst]) > values[0] * (1.0 + 1e-12):
            raise DomainError(
                f"|c({worst})| = {abs(values[worst])!r} exceeds c(0) = {values[0]!r}",
                lag=worst,
            )
        object.__setattr__(self, "values", values)

    @property
    def truncation_length(self) -> int:
        return self.values.size - 1

    @property
    def is_white_noise(self) -> bool:
        return not np.any(self.values[1:])

    def at(self, lags: np.ndarray) -> np.ndarray:
        """c(r) for arbitrary integer lags, zero outside the stored range."""

        lags = np.abs(np.asarray(lags, dtype=int))
        out = np.zeros(lags.shape, dtype=float)
        inside = lags <= self.truncation_length
        out[inside] = self.values[lags[inside]]
        return out

    def padded(self, max_lag: int) -> np.ndarray:
        """c(0..max_lag), zero-filled or truncated."""

        return self.at(np.arange(max_lag + 1))

    def extended(self, max_lag: int) -> "CovarianceSequence":
        """Same sequence stored out to at least ``max_lag`` (zeros beyond L_c)."""

        if max_lag <= self.truncation_length:
            return self
        return CovarianceSequence(self.padded(max_lag))


def acf_from_ma_kernel(psi: Sequence[float], sigma2: float, max_lag: int) -> CovarianceSequence:
    """c(r) = sigma2 * sum_j psi_j psi_{j+|r|} for a finite MA kernel with psi_0 = 1."""

    if sigma2 <= 0:
        raise DomainError(f"innovation variance must be positive, got {sigma2!r}", sigma2=sigma2)
    psi = np.asarray(psi, dtype=float)
    if psi.size == 0 or not np.isclose(psi[0], 1.0):
        raise ValueError("MA kernel must start with psi_0 = 1")
    if max_lag < 0:
        raise ValueError("max_lag must be non-negative")

    full = np.correlate(psi, psi, mode="full")[psi.size - 1 :]
    values = np.zeros(max_lag + 1)
    keep = min(full.size, max_lag + 1)
    values[:keep] = sigma2 * full[:keep]
    return CovarianceSequence(values)


def ar_spectral_radius(ar: Sequence[float]) -> float:
    """Spectral radius of the AR companion matrix (< 1 for a causal model)."""

    ar = np.asarray(ar, dtype=float)
    if ar.size == 0 or not np.any(ar):
        return 0.0
    process = ArmaProcess.from_coeffs(ar, None)
    return float(np.max(1.0 / np.abs(process.arroots)))


def expand_ma_kernel(
    ar: Sequence[float], ma: Sequence[float], tail_tolerance: Optional[float] = None
) -> np.ndarray:
    """psi = ma/ar, extended until the absolute mass of the last half is below tolerance."""

    tol = settings.tail_tolerance if tail_tolerance is None else tail_tolerance
    ar = np.asarray(ar, dtype=float)
    ma = np.asarray(ma, dtype=float)
    radius = ar_spectral_radius(ar)
    if radius >= 1.0:
        raise NonCausalModelError(
            f"AR polynomial has a root in the closed unit disk (spectral radius {radius:.6g})",
            spectral_radius=radius,
        )

    process = ArmaProcess.from_coeffs(ar if ar.size else None, ma if ma.size else None)
    if not np.any(ar):
        return process.arma2ma(lags=ma.size + 1)

    lags = 64
    while True:
        psi = process.arma2ma(lags=lags)
        tail = float(np.sum(np.abs(psi[lags // 2 :])))
        if tail < tol:
            return psi
        if lags >= settings.max_kernel_length:
            logger.warning(
                "MA kernel expansion stopped at %s terms with tail mass %s", lags, tail
            )
            return psi
        lags *= 2


def tail_lag(values: np.ndarray, tail_tolerance: Optional[float] = None) -> int:
    """Smallest R with sum_{r > R} |values[r]| <= tolerance."""

    tol = settings.tail_tolerance if tail_tolerance is None else tail_tolerance
    magnitude = np.abs(np.asarray(values, dtype=float))
    beyond = np.append(np.cumsum(magnitude[::-1])[::-1][1:], 0.0)
    return int(np.argmax(beyond <= tol))


def acf_from_arma(
    ar: Sequence[float], ma: Sequence[float], sigma2: float, max_lag: Optional[int] = None
) -> CovarianceSequence:
    """ACF of X_t = sum a_i X_{t-i} + eps_t + sum b_j eps_{t-j} via its MA(inf) kernel.

    With ``max_lag=None`` the sequence is cut where the dropped tail of |c(r)| falls below
    ``settings.tail_tolerance``.
    """

    if sigma2 <= 0:
        raise DomainError(f"innovation variance must be positive, got {sigma2!r}", sigma2=sigma2)
    psi = expand_ma_kernel(ar, ma)
    logger.debug("ARMA kernel expanded to %s terms", psi.size)
    if max_lag is None:
        full = acf_from_ma_kernel(psi, sigma2, psi.size - 1)
        max_lag = tail_lag(full.values)
        logger.debug("ARMA autocovariance cut at lag %s", max_lag)
        return CovarianceSequence(full.values[: max_lag + 1])
    return acf_from_ma_kernel(psi, sigma2, max_lag)


def eval_spectral_density(cov: CovarianceSequence, n_grid: Optional[int] = None) -> SpectralGrid:
    """f(omega_k) = c(0) + 2 sum_r c(r) cos(r omega_k); raises if any sample is <= 0."""

    lag = cov.truncation_length
    if n_grid is None:
        n_grid = default_grid_size(default_truncation(lag))
    if n_grid < 2 * lag + 2:
        raise ValueError(f"n_grid={n_grid} must be at least 2*L_c + 2 = {2 * lag + 2}")

    symmetric = np.zeros(n_grid)
    symmetric[: lag + 1] = cov.values
    if lag:
        symmetric[n_grid - lag :] = cov.values[1:][::-1]
    density = np.real(np.fft.fft(symmetric))

    worst = int(np.argmin(density))
    if density[worst] <= 0:
        omega = 2.0 * np.pi * worst / n_grid
        raise PositiveDefinitenessError(
            f"spectral density is not positive at omega_{worst} = {omega:.17g} "
            f"(f = {density[worst]:.6g})",
            omega=omega,
            index=worst,
            value=float(density[worst]),
        )
    return SpectralGrid(n_grid=n_grid, values=density)


def validate_covariance(cov: CovarianceSequence, n_grid: Optional[int] = None) -> SpectralGrid:
    """Positivity check on the grid; returns the density samples."""

    grid = eval_spectral_density(cov, n_grid)
    logger.debug(
        "covariance L_c=%s validated on %s frequencies (f in [%s, %s])",
        cov.truncation_length,
        grid.n_grid,
        grid.minimum,
        grid.maximum,
    )
    return grid
