"""Right-hand sides g of the Wiener-Hopf system."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..covmodel import CovarianceSequence
from .sequences import CausalSeq

RHS_KINDS = ("array", "cross_cov_shift", "unit")


def rhs_array(values: Sequence[float]) -> CausalSeq:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("right-hand side must have at least one entry")
    return CausalSeq(values)


def rhs_cross_cov_shift(cov: CovarianceSequence, m: int, length: Optional[int] = None) -> CausalSeq:
    """g_l = c(l + m): the normal equations of the m-step ahead predictor."""

    if m < 0:
        raise ValueError("shift must be non-negative")
    if length is None:
        length = max(cov.truncation_length - m + 1, 1)
    return CausalSeq(cov.at(np.arange(length) + m))


def rhs_unit(k: int) -> CausalSeq:
    """g = e_k; the solution is row k of T(f)^-1."""

    if k < 0:
        raise ValueError("unit index must be non-negative")
    values = np.zeros(k + 1)
    values[k] = 1.0
    return CausalSeq(values)


def build_rhs(
    kind: str,
    cov: Optional[CovarianceSequence] = None,
    *,
    values: Optional[Sequence[float]] = None,
    m: Optional[int] = None,
    k: Optional[int] = None,
) -> CausalSeq:
    if kind == "array":
        return rhs_array(values if values is not None else [])
    if kind == "cross_cov_shift":
        if cov is None or m is None:
            raise ValueError("cross_cov_shift needs a covariance and a shift m")
        return rhs_cross_cov_shift(cov, m)
    if kind == "unit":
        if k is None:
            raise ValueError("unit right-hand side needs an index k")
        return rhs_unit(k)
    raise ValueError(f"unknown right-hand side type {kind!r}; expected one of {RHS_KINDS}")
