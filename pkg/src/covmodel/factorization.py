"""Levinson-Durbin fits and the Wold (spectral) factorization built from them."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import toeplitz
from scipy.signal import lfilter
from statsmodels.tsa.arima_process import arma_acovf
from statsmodels.tsa.stattools import levinson_durbin as _levinson_durbin

from config.settings import settings

from ..errors import FactorizationQualityError, PositiveDefinitenessError
from ..monitoring.metrics import record_factorization
from .grid import SpectralGrid, default_grid_size, default_truncation, transfer_on_grid
from .sequences import CovarianceSequence, acf_from_ma_kernel, eval_spectral_density

logger = logging.getLogger(__name__)

YULE_WALKER_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class ARFit:
    """Best fitting AR(p): coefficients phi_{p,1..p}, innovation variance and PACF."""

    p: int
    coeffs: np.ndarray
    sigma_p2: float
    reflection: np.ndarray
    sigma_path: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))
    phi_table: np.ndarray = field(repr=False, default_factory=lambda: np.empty((0, 0)))
    yule_walker_residual: float = 0.0

    def order_coeffs(self, k: int) -> np.ndarray:
        """phi_{k,1..k} of the intermediate order-k fit (0 <= k <= p)."""

        if not 0 <= k <= self.p:
            raise ValueError(f"order {k} outside 0..{self.p}")
        if k == 0:
            return np.zeros(0)
        return self.phi_table[1 : k + 1, k].copy()


@dataclass(frozen=True, eq=False)
class WoldFactorization:
    """f = sigma2 |psi|^2 = sigma2 |phi|^-2 with phi(w) = 1 - sum_j phi_j e^{ijw}.

    ``phi`` holds phi_1..phi_{L_w}, ``psi`` holds psi_0..psi_{L_w}.
    """

    sigma2: float
    psi: np.ndarray
    phi: np.ndarray
    order: int
    residual: float = float("nan")

    @property
    def truncation_length(self) -> int:
        return self.phi.size

    @property
    def phi_tilde(self) -> np.ndarray:
        """(1, -phi_1, -phi_2, ...): coefficients of phi(omega)."""

        return np.concatenate(([1.0], -self.phi))

    def phi_padded(self, length: int) -> np.ndarray:
        """(0, phi_1, phi_2, ...) zero-filled to ``length`` entries; index i holds phi_i."""

        out = np.zeros(length)
        keep = min(length - 1, self.phi.size)
        if keep > 0:
            out[1 : keep + 1] = self.phi[:keep]
        return out

    def psi_padded(self, length: int) -> np.ndarray:
        out = np.zeros(length)
        keep = min(length, self.psi.size)
        out[:keep] = self.psi[:keep]
        return out

    def density_on(self, n_grid: int) -> np.ndarray:
        """sigma2 |psi(omega_k)|^2."""

        return self.sigma2 * np.abs(transfer_on_grid(self.psi, n_grid)) ** 2

    def implied_acf(self, max_lag: int) -> CovarianceSequence:
        return acf_from_ma_kernel(self.psi, self.sigma2, max_lag)

    @classmethod
    def from_ar_fit(cls, fit: ARFit, truncation_length: int) -> "WoldFactorization":
        if truncation_length < fit.p:
            raise ValueError("truncation length must be at least the AR order")
        phi = np.zeros(truncation_length)
        phi[: fit.p] = fit.coeffs
        psi = invert_power_series(np.concatenate(([1.0], -phi[: fit.p])), truncation_length + 1)
        return cls(sigma2=float(fit.sigma_p2), psi=psi, phi=phi, order=fit.p)

    @classmethod
    def white_noise(cls, variance: float, truncation_length: int) -> "WoldFactorization":
        psi = np.zeros(truncation_length + 1)
        psi[0] = 1.0
        return cls(sigma2=float(variance), psi=psi, phi=np.zeros(truncation_length), order=0)


def levinson_durbin(cov: CovarianceSequence, p: int) -> ARFit:
    """Yule-Walker AR(p) fit by the Levinson-Durbin recursion."""

    if p < 0:
        raise ValueError("AR order must be non-negative")
    if p > cov.truncation_length:
        raise ValueError(
            f"AR order {p} exceeds the covariance truncation length {cov.truncation_length}"
        )
    c0 = float(cov.values[0])
    if p == 0:
        return ARFit(
            p=0,
            coeffs=np.zeros(0),
            sigma_p2=c0,
            reflection=np.zeros(0),
            sigma_path=np.array([c0]),
            phi_table=np.zeros((1, 1)),
        )

    _, arcoefs, pacf, sig, phi_table = _levinson_durbin(cov.values[: p + 1], nlags=p, isacov=True)
    reflection = np.asarray(pacf[1:], dtype=float)
    sigma_path = np.concatenate(([c0], np.asarray(sig[1:], dtype=float)))

    bad = np.flatnonzero(~(np.abs(reflection) < 1.0))
    if bad.size or not np.all(sigma_path > 0):
        index = int(bad[0]) + 1 if bad.size else int(np.argmin(sigma_path))
        value = float(reflection[index - 1]) if bad.size else float(sigma_path[index])
        raise PositiveDefinitenessError(
            f"covariance is not positive definite: reflection coefficient {index} = {value!r}",
            index=index,
            value=value,
        )

    coeffs = np.asarray(arcoefs, dtype=float)
    matrix = toeplitz(cov.values[:p])
    residual = float(np.max(np.abs(matrix @ coeffs - cov.values[1 : p + 1]))) / c0
    if residual > YULE_WALKER_TOLERANCE:
        logger.warning("Yule-Walker residual %s at order %s exceeds %s", residual, p,
                       YULE_WALKER_TOLERANCE)

    return ARFit(
        p=p,
        coeffs=coeffs,
        sigma_p2=float(sigma_path[-1]),
        reflection=reflection,
        sigma_path=sigma_path,
        phi_table=np.asarray(phi_table, dtype=float),
        yule_walker_residual=residual,
    )


def invert_power_series(coeffs: Sequence[float], out_len: int) -> np.ndarray:
    """b with (a * b) = (1, 0, ..., 0) over ``out_len`` terms; requires a_0 = 1."""

    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size == 0 or coeffs[0] != 1.0:
        raise ValueError("power series must start with a_0 = 1")
    impulse = np.zeros(out_len)
    if out_len:
        impulse[0] = 1.0
    return lfilter([1.0], coeffs, impulse)


def ar_fit_acf(fit: ARFit, max_lag: int) -> CovarianceSequence:
    """Autocovariances of the fitted AR(p) model, sigma_p2 |phi^(p)|^-2."""

    values = arma_acovf(np.concatenate(([1.0], -fit.coeffs)), np.array([1.0]),
                        nobs=max_lag + 1, sigma2=fit.sigma_p2)
    return CovarianceSequence(np.asarray(values, dtype=float))


def spectral_residual(wold: WoldFactorization, density: SpectralGrid) -> float:
    """max_k |sigma2 |psi(omega_k)|^2 - f(omega_k)| / f(omega_k)."""

    implied = wold.density_on(density.n_grid)
    return float(np.max(np.abs(implied - density.values) / density.values))


def wold_from_covariance(
    cov: CovarianceSequence,
    order: Optional[int] = None,
    n_grid: Optional[int] = None,
    *,
    truncation_length: Optional[int] = None,
    tolerance: Optional[float] = None,
) -> WoldFactorization:
    """Wold factorization from a high-order Levinson fit and power-series inversion."""

    start = time.perf_counter()
    lag = cov.truncation_length
    if order is None:
        order = min(settings.ar_order, lag)
    if order > lag:
        raise ValueError(f"AR order {order} exceeds the covariance truncation length {lag}")
    length = truncation_length or default_truncation(lag, order)
    if length < order:
        raise ValueError("truncation length must be at least the AR order")
    n_grid = n_grid or default_grid_size(length)
    tol = settings.factorization_tolerance if tolerance is None else tolerance

    density = eval_spectral_density(cov, n_grid)
    density.require(length + 1)

    if cov.is_white_noise:
        wold = WoldFactorization.white_noise(cov.values[0], length)
    else:
        wold = WoldFactorization.from_ar_fit(levinson_durbin(cov, order), length)

    residual = spectral_residual(wold, density)
    record_factorization(residual)
    logger.debug(
        "Wold factorization: order=%s L_w=%s n_grid=%s residual=%s (%.3fs)",
        order,
        length,
        n_grid,
        residual,
        time.perf_counter() - start,
    )
    if residual > tol:
        raise FactorizationQualityError(
            f"factorization residual {residual:.3g} exceeds tolerance {tol:.3g}; "
            f"increase the AR order (currently {order}) or the covariance length (L_c={lag})",
            residual=residual,
            tolerance=tol,
        )
    return replace(wold, residual=residual)
