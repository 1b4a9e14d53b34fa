"""Dense truncated Toeplitz machinery (the oracle side).

The oracle factorizes T_n(f) with a general symmetric Cholesky factorization,
so it shares no recursion with the Levinson-based code paths it checks.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, get_lapack_funcs, toeplitz

from ..covmodel import CovarianceSequence, WoldFactorization
from ..errors import PositiveDefinitenessError
from ..wh_core import CausalSeq

logger = logging.getLogger(__name__)

ILL_CONDITIONED = 1e-12


@dataclass(frozen=True, eq=False)
class ToeplitzSpec:
    """T_n(f) = (c(s - t); 0 <= s, t <= n - 1)."""

    cov: CovarianceSequence
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("Toeplitz dimension must be at least 1")

    def matrix(self) -> np.ndarray:
        return toeplitz_matrix(self)


def toeplitz_matrix(spec: ToeplitzSpec) -> np.ndarray:
    return toeplitz(spec.cov.padded(spec.n - 1))


@dataclass(frozen=True, eq=False)
class DenseSolve:
    h: CausalSeq
    rcond: float

    @property
    def condition(self) -> float:
        return float("inf") if self.rcond == 0 else 1.0 / self.rcond


def _factor(spec: ToeplitzSpec) -> Tuple[Tuple[np.ndarray, bool], float]:
    matrix = spec.matrix()
    try:
        factor = cho_factor(matrix, lower=False, check_finite=False)
    except LinAlgError as exc:
        raise PositiveDefinitenessError(
            f"T_{spec.n}(f) is not positive definite: {exc}", index=spec.n
        ) from exc
    anorm = float(np.max(np.sum(np.abs(matrix), axis=0)))
    (pocon,) = get_lapack_funcs(("pocon",), (factor[0],))
    rcond, _ = pocon(factor[0], anorm)
    if rcond < ILL_CONDITIONED:
        logger.warning("T_%s(f) is ill-conditioned (rcond=%s)", spec.n, rcond)
    return factor, float(rcond)


def toeplitz_solve_truncated(spec: ToeplitzSpec, g: Sequence[float]) -> DenseSolve:
    """h = T_n(f)^-1 g by dense Cholesky; g is zero-padded to n."""

    g = g if isinstance(g, CausalSeq) else CausalSeq.of(g)
    if g.length > spec.n:
        raise ValueError(f"right-hand side has {g.length} entries but n={spec.n}")
    factor, rcond = _factor(spec)
    h = cho_solve(factor, g.padded(spec.n), check_finite=False)
    logger.debug("dense solve n=%s rcond=%s", spec.n, rcond)
    return DenseSolve(h=CausalSeq(h), rcond=rcond)


def dense_inverse(spec: ToeplitzSpec, columns: Optional[Sequence[int]] = None) -> np.ndarray:
    """Columns of T_n(f)^-1 (all of them by default)."""

    factor, _ = _factor(spec)
    identity = np.eye(spec.n)
    if columns is not None:
        identity = identity[:, list(columns)]
    return cho_solve(factor, identity, check_finite=False)


def lower_toeplitz(first_column: np.ndarray, n: int) -> np.ndarray:
    column = np.zeros(n)
    keep = min(n, first_column.size)
    column[:keep] = first_column[:keep]
    return toeplitz(column, np.zeros(n))


def cholesky_identity_residual(
    spec: ToeplitzSpec, wold: WoldFactorization, band: Optional[int] = None
) -> float:
    """max |T_n^-1 - sigma^-2 L L'| over the block away from the truncation edge.

    L is the n x n lower-triangular Toeplitz matrix of (1, -phi_1, ...); rows
    and columns within ``band`` (default L_w) of index n - 1 are excluded.
    """

    band = wold.truncation_length if band is None else band
    inner = spec.n - band
    if inner <= 0:
        raise ValueError(f"edge band {band} leaves no interior block at n={spec.n}")
    lower = lower_toeplitz(wold.phi_tilde, spec.n)
    approx = lower @ lower.T / wold.sigma2
    inverse = dense_inverse(spec)
    return float(np.max(np.abs(inverse[:inner, :inner] - approx[:inner, :inner])))
