"""Solvers for the Wiener-Hopf system g_l = sum_j h_j c(l - j), l >= 0.

Causal parts are taken in the coefficient domain by exact linear convolution;
grid samples are only produced for reporting and cross-checks.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from config.settings import settings

from ..covmodel import (
    CovarianceSequence,
    SpectralGrid,
    WoldFactorization,
    coefficients_from_grid,
    conjugate_transfer_on_grid,
    transfer_on_grid,
)
from ..errors import NumericalConsistencyError
from ..monitoring.metrics import record_solve
from .sequences import BiSeq, CausalSeq, anticausal_part, causal_part

logger = logging.getLogger(__name__)

METHOD_TAGS = ("classical", "prediction", "oracle", "ar_p")
ROUTES = ("coefficient", "grid")

SequenceLike = Union[CausalSeq, np.ndarray, list, tuple]


@dataclass(frozen=True, eq=False)
class ResidualReport:
    max_residual: float
    residuals: np.ndarray
    check_len: int


@dataclass(frozen=True, eq=False)
class FilterSolution:
    """Filter coefficients h_j with samples of H(omega) on the same grid."""

    h: CausalSeq
    H_grid: np.ndarray
    method_tag: str
    residual: float = float("nan")
    check_len: int = 0
    tail_energy: float = 0.0

    def __post_init__(self) -> None:
        if self.method_tag not in METHOD_TAGS:
            raise ValueError(f"unknown method tag {self.method_tag!r}")

    @property
    def n_grid(self) -> int:
        return self.H_grid.size


def _as_causal(seq: SequenceLike) -> CausalSeq:
    return seq if isinstance(seq, CausalSeq) else CausalSeq.of(seq)


def normal_equation_values(
    cov: CovarianceSequence, h: np.ndarray, lags: np.ndarray
) -> np.ndarray:
    """sum_j h_j c(l - j) for each requested lag l (negative lags allowed)."""

    h = np.asarray(h, dtype=float)
    lags = np.asarray(lags, dtype=int)
    if h.size == 0 or lags.size == 0:
        return np.zeros(lags.shape)
    lo = int(lags.min()) - (h.size - 1)
    hi = int(lags.max())
    segment = cov.at(np.arange(lo, hi + 1))
    full = np.convolve(h, segment)
    return full[lags - lo]


def verify_normal_equations(
    cov: CovarianceSequence,
    h: SequenceLike,
    g: SequenceLike,
    check_len: Optional[int] = None,
) -> ResidualReport:
    """Per-lag residuals |g_l - sum_j h_j c(l - j)| for l = 0..check_len."""

    h = _as_causal(h)
    g = _as_causal(g)
    if check_len is None:
        check_len = g.length + settings.residual_padding
    lags = np.arange(check_len + 1)
    residuals = np.abs(g.padded(check_len + 1) - normal_equation_values(cov, h.values, lags))
    return ResidualReport(
        max_residual=float(np.max(residuals)), residuals=residuals, check_len=check_len
    )


def _finish(
    u: np.ndarray,
    g: CausalSeq,
    wold: WoldFactorization,
    grid: SpectralGrid,
    method_tag: str,
    started: float,
    cov: Optional[CovarianceSequence],
    out_len: Optional[int],
    check_len: Optional[int],
) -> FilterSolution:
    """h = sigma^-2 phi * u, then grid samples and the normal-equation residual."""

    full = np.convolve(wold.phi_tilde, u) / wold.sigma2
    return _package(full, g, wold, grid, method_tag, started, cov, out_len, check_len)


def _package(
    full: np.ndarray,
    g: CausalSeq,
    wold: WoldFactorization,
    grid: SpectralGrid,
    method_tag: str,
    started: float,
    cov: Optional[CovarianceSequence],
    out_len: Optional[int],
    check_len: Optional[int],
) -> FilterSolution:
    length = full.size if out_len is None else out_len
    h = np.zeros(length)
    keep = min(length, full.size)
    h[:keep] = full[:keep]
    tail_energy = float(np.sum(full[keep:] ** 2))

    grid.require(h.size)
    H_grid = transfer_on_grid(h, grid.n_grid)

    if check_len is None:
        check_len = g.length + settings.residual_padding
    reference = cov if cov is not None else wold.implied_acf(check_len + h.size)
    report = verify_normal_equations(reference, h, g, check_len)

    elapsed = time.perf_counter() - started
    record_solve(method_tag, elapsed)
    logger.debug(
        "%s solve: len(g)=%s len(h)=%s residual=%s tail=%s (%.3fs)",
        method_tag,
        g.length,
        h.size,
        report.max_residual,
        tail_energy,
        elapsed,
    )
    return FilterSolution(
        h=CausalSeq(h),
        H_grid=H_grid,
        method_tag=method_tag,
        residual=report.max_residual,
        check_len=check_len,
        tail_energy=tail_energy,
    )


def conjugate_product(g: CausalSeq, wold: WoldFactorization) -> BiSeq:
    """Coefficients of phi(omega)^* G_+(omega) as a bi-infinite sequence."""

    product = np.convolve(wold.phi_tilde[::-1], g.values)
    return BiSeq.from_full(product, zero_index=wold.truncation_length)


def solve_wh_classical(
    g: SequenceLike,
    wold: WoldFactorization,
    grid: SpectralGrid,
    *,
    cov: Optional[CovarianceSequence] = None,
    out_len: Optional[int] = None,
    check_len: Optional[int] = None,
    method_tag: str = "classical",
) -> FilterSolution:
    """H = sigma^-2 phi [phi^* G_+]_+ (Wiener-Hopf causal-part method)."""

    started = time.perf_counter()
    g = _as_causal(g)
    u = causal_part(conjugate_product(g, wold)).values
    return _finish(u, g, wold, grid, method_tag, started, cov, out_len, check_len)


def prediction_numerator(g: CausalSeq, wold: WoldFactorization) -> np.ndarray:
    """Coefficients u_m of sum_l g_l (e^{ilw} - sum_{s=1}^{l} phi_s e^{i(l-s)w})."""

    u = np.zeros(g.length)
    phi = wold.phi
    for ell, weight in enumerate(g.values):
        if weight == 0.0:
            continue
        u[ell] += weight
        # the inner sum is empty for l = 0
        span = min(ell, phi.size)
        if span:
            u[ell - span : ell] -= weight * phi[:span][::-1]
    return u


def _grid_route(g: CausalSeq, wold: WoldFactorization, grid: SpectralGrid) -> np.ndarray:
    """H = sum_l g_l (e^{ilw} + psi^* phi_l^*) / f, inverse transformed."""

    n = grid.n_grid
    length = wold.truncation_length
    phi_full = wold.phi_padded(length + g.length + 1)
    tails = np.correlate(phi_full, g.values, mode="valid")
    tails[0] = 0.0
    numerator = transfer_on_grid(g.values, n) + conjugate_transfer_on_grid(
        wold.psi, n
    ) * conjugate_transfer_on_grid(tails, n)
    return coefficients_from_grid(numerator / wold.density_on(n), length + g.length)


def solve_wh_prediction(
    g: SequenceLike,
    wold: WoldFactorization,
    grid: SpectralGrid,
    *,
    route: str = "coefficient",
    cross_check: bool = True,
    tolerance: Optional[float] = None,
    cov: Optional[CovarianceSequence] = None,
    out_len: Optional[int] = None,
    check_len: Optional[int] = None,
) -> FilterSolution:
    """Prediction-based solution; the coefficient route is authoritative.

    ``route="grid"`` returns the divide-by-f solution instead. With
    ``cross_check`` both routes are computed and must agree within
    ``tolerance`` (relative to max|h|).
    """

    if route not in ROUTES:
        raise ValueError(f"route must be one of {ROUTES}, got {route!r}")
    started = time.perf_counter()
    g = _as_causal(g)

    full = None
    if route == "coefficient" or cross_check:
        full = np.convolve(wold.phi_tilde, prediction_numerator(g, wold)) / wold.sigma2
    gridded = None
    if route == "grid" or cross_check:
        gridded = _grid_route(g, wold, grid)

    if cross_check:
        tol = settings.grid_route_tolerance if tolerance is None else tolerance
        scale = max(1.0, float(np.max(np.abs(full))))
        gap = float(np.max(np.abs(full - gridded))) / scale
        if gap > tol:
            raise NumericalConsistencyError(
                f"coefficient and grid routes disagree by {gap:.3g} (tolerance {tol:.3g})",
                gap=gap,
                tolerance=tol,
            )

    chosen = full if route == "coefficient" else gridded
    return _package(chosen, g, wold, grid, "prediction", started, cov, out_len, check_len)


def g_minus(g: SequenceLike, wold: WoldFactorization, out_len: Optional[int] = None) -> BiSeq:
    """Extension g_l, l < 0: G_- = -psi^* [phi^* G_+]_-."""

    g = _as_causal(g)
    length = wold.truncation_length if out_len is None else out_len
    anticausal = anticausal_part(conjugate_product(g, wold))
    extension = -np.convolve(wold.psi, anticausal)
    neg = np.zeros(length)
    keep = min(length, extension.size)
    neg[:keep] = extension[:keep]
    return BiSeq(neg=neg, pos=CausalSeq(g.values.copy()))
