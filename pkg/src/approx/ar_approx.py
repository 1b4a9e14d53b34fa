"""AR(p) approximation H_p of the Wiener-Hopf solution and its error decay in p."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from config.settings import settings

from ..covmodel import (
    ARFit,
    CovarianceSequence,
    SpectralGrid,
    WoldFactorization,
    ar_fit_acf,
    default_grid_size,
    levinson_durbin,
    transfer_on_grid,
)
from ..wh_core import CausalSeq, FilterSolution, solve_wh_classical

logger = logging.getLogger(__name__)

DECAY_COLUMNS = ["p", "sup_err", "baxter_lhs", "ar_tail", "sup_g", "sup_Gplus"]
REFERENCE_FACTOR = 4
BOUND_FIT_ORDER = 8
BOUND_SLACK = 2.0
# sup errors at this level are treated as converged when checking the uniform bound
ROUNDING_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class ApproxConfig:
    cov: CovarianceSequence
    g: CausalSeq
    p_list: Sequence[int] = field(default_factory=lambda: list(settings.p_list))
    reference_order: Optional[int] = None
    n_grid: Optional[int] = None
    smoothness_k: float = field(default_factory=lambda: settings.smoothness_k)

    def __post_init__(self) -> None:
        p_list = [int(p) for p in self.p_list]
        if not p_list:
            raise ValueError("p_list must not be empty")
        if p_list[0] < 1 or any(b <= a for a, b in zip(p_list, p_list[1:])):
            raise ValueError(f"p_list must be strictly increasing positive orders, got {p_list}")
        reference = self.reference_order or REFERENCE_FACTOR * p_list[-1]
        if reference < REFERENCE_FACTOR * p_list[-1]:
            raise ValueError(
                f"reference_order {reference} must be at least {REFERENCE_FACTOR} x max(p_list)"
            )
        object.__setattr__(self, "p_list", p_list)
        object.__setattr__(self, "reference_order", reference)

    @property
    def grid(self) -> SpectralGrid:
        n = self.n_grid or default_grid_size(self.reference_order + self.g.length)
        return SpectralGrid.bare(n)


@dataclass(frozen=True)
class DecayRow:
    p: int
    sup_err: float
    baxter_lhs: float
    ar_tail: float
    sup_g: float
    sup_Gplus: float


@dataclass(frozen=True, eq=False)
class DecayStudy:
    rows: List[DecayRow]
    slope: Optional[float]
    semilog_slope: Optional[float]
    c_fit: Optional[float]
    reference_residual: float
    uniform_bound_holds: Optional[bool]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(row) for row in self.rows], columns=DECAY_COLUMNS)

    def summary(self) -> Dict[str, Optional[float]]:
        return {
            "slope": self.slope,
            "semilog_slope": self.semilog_slope,
            "C_fit": self.c_fit,
            "reference_residual": self.reference_residual,
            "uniform_bound_holds": self.uniform_bound_holds,
        }


def _fit(cov: CovarianceSequence, p: int) -> ARFit:
    return levinson_durbin(cov.extended(p), p)


def fit_Hp(
    g: Sequence[float],
    cov: CovarianceSequence,
    p: int,
    grid: SpectralGrid,
    *,
    fit: Optional[ARFit] = None,
) -> FilterSolution:
    """H_p = sigma_p^-2 phi^(p) [phi^(p)* G_+]_+ from the order-p Levinson fit.

    The residual is taken against the AR(p) model's own autocovariances,
    i.e. it checks T(f_p) h_p = g.
    """

    if p < 1:
        raise ValueError("AR order p must be at least 1")
    g = g if isinstance(g, CausalSeq) else CausalSeq.of(g)
    fit = fit or _fit(cov, p)
    wold = WoldFactorization.from_ar_fit(fit, p)
    check_len = g.length + settings.residual_padding
    model_acf = ar_fit_acf(fit, check_len + g.length + p + 1)
    return solve_wh_classical(
        g, wold, grid, cov=model_acf, check_len=check_len, method_tag="ar_p"
    )


def baxter_terms(
    cov: CovarianceSequence,
    p: int,
    reference_order: int,
    *,
    reference: Optional[ARFit] = None,
    fit: Optional[ARFit] = None,
) -> Tuple[float, float]:
    """(sum_{j<=p} |phi_{p,j} - phi_j|, sum_{j>p} |phi_j|) with phi from the reference fit."""

    if reference_order < REFERENCE_FACTOR * p:
        raise ValueError(
            f"reference_order {reference_order} must be at least {REFERENCE_FACTOR * p} for p={p}"
        )
    reference = reference or _fit(cov, reference_order)
    fit = fit or _fit(cov, p)
    lhs = float(np.sum(np.abs(fit.coeffs - reference.coeffs[:p])))
    tail = float(np.sum(np.abs(reference.coeffs[p:])))
    logger.debug(
        "baxter p=%s lhs=%s tail=%s last reference coefficient=%s",
        p,
        lhs,
        tail,
        abs(reference.coeffs[-1]),
    )
    return lhs, tail


def _bound_shape(p: int, sup_g: float, sup_gplus: float, k: float) -> float:
    return p ** (-k + 1) * sup_g + p ** (-k) * sup_gplus


def _slopes(rows: List[DecayRow]) -> Tuple[Optional[float], Optional[float]]:
    if len(rows) < 2 or any(row.sup_err <= 0 for row in rows):
        return None, None
    orders = np.array([row.p for row in rows], dtype=float)
    log_err = np.log([row.sup_err for row in rows])
    slope = float(np.polyfit(np.log(orders), log_err, 1)[0])
    semilog = float(np.polyfit(orders, log_err, 1)[0])
    return slope, semilog


def _uniform_bound(rows: List[DecayRow], k: float) -> Tuple[Optional[float], Optional[bool]]:
    """Fit C at the first p >= 8 and check the later orders with slack."""

    eligible = [row for row in rows if row.p >= BOUND_FIT_ORDER]
    if not eligible:
        return None, None
    anchor = eligible[0]
    c_fit = anchor.sup_err / _bound_shape(anchor.p, anchor.sup_g, anchor.sup_Gplus, k)
    holds = all(
        row.sup_err <= BOUND_SLACK * c_fit * _bound_shape(row.p, row.sup_g, row.sup_Gplus, k)
        + ROUNDING_FLOOR
        for row in eligible[1:]
    )
    return float(c_fit), holds


def decay_study(config: ApproxConfig) -> DecayStudy:
    """Run H_p against a reference-order "truth" for every p in the configuration."""

    grid = config.grid
    g = config.g
    reference = _fit(config.cov, config.reference_order)
    truth = fit_Hp(g, config.cov, config.reference_order, grid, fit=reference)
    coarse = fit_Hp(g, config.cov, config.reference_order // 2, grid)
    reference_residual = float(np.max(np.abs(truth.H_grid - coarse.H_grid)))

    sup_g = float(np.max(np.abs(g.values)))
    sup_gplus = float(np.max(np.abs(transfer_on_grid(g.values, grid.n_grid))))

    def evaluate(p: int) -> DecayRow:
        fit = _fit(config.cov, p)
        approx = fit_Hp(g, config.cov, p, grid, fit=fit)
        lhs, tail = baxter_terms(
            config.cov, p, config.reference_order, reference=reference, fit=fit
        )
        return DecayRow(
            p=p,
            sup_err=float(np.max(np.abs(truth.H_grid - approx.H_grid))),
            baxter_lhs=lhs,
            ar_tail=tail,
            sup_g=sup_g,
            sup_Gplus=sup_gplus,
        )

    workers = max(1, settings.study_workers)
    if workers == 1:
        rows = [evaluate(p) for p in config.p_list]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(evaluate, config.p_list))

    slope, semilog = _slopes(rows)
    c_fit, holds = _uniform_bound(rows, config.smoothness_k)
    smallest = min(row.sup_err for row in rows)
    if smallest > 0 and reference_residual * 100 > smallest:
        logger.warning(
            "reference residual %s is within 100x of the smallest sup error %s; "
            "raise reference_order",
            reference_residual,
            smallest,
        )
    logger.info(
        "decay study p=%s slope=%s semilog=%s C_fit=%s",
        config.p_list,
        slope,
        semilog,
        c_fit,
    )
    return DecayStudy(
        rows=rows,
        slope=None if slope is None or math.isnan(slope) else slope,
        semilog_slope=None if semilog is None or math.isnan(semilog) else semilog,
        c_fit=c_fit,
        reference_residual=reference_residual,
        uniform_bound_holds=holds,
    )
