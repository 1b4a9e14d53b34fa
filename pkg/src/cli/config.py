"""Run configuration: one JSON file per run, validated with pydantic."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, root_validator, validator

from config.settings import settings

from ..covmodel import CovarianceSequence, acf_from_arma, acf_from_ma_kernel
from ..errors import ConfigurationError
from ..wh_core import CausalSeq, build_rhs

COMMANDS = ("factorize", "solve", "invert", "predict", "approx-study")


class SequenceModel(BaseModel):
    type: Literal["sequence"]
    values: List[float]

    def covariance(self, max_lag: Optional[int]) -> CovarianceSequence:
        cov = CovarianceSequence(np.asarray(self.values, dtype=float))
        return cov.extended(settings.default_max_lag if max_lag is None else max_lag)


class ArmaModel(BaseModel):
    type: Literal["arma"]
    ar: List[float] = []
    ma: List[float] = []
    sigma2: float = 1.0

    @validator("sigma2")
    def _positive_variance(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("sigma2 must be positive")
        return value

    def covariance(self, max_lag: Optional[int]) -> CovarianceSequence:
        if max_lag is not None:
            return acf_from_arma(self.ar, self.ma, self.sigma2, max_lag)
        cov = acf_from_arma(self.ar, self.ma, self.sigma2)
        return cov.extended(settings.default_max_lag)


class MaKernelModel(BaseModel):
    """Explicit kernel ``psi`` or the polynomial family psi_j = scale (1 + j)^-power."""

    type: Literal["ma_kernel"]
    psi: Optional[List[float]] = None
    scale: Optional[float] = None
    power: Optional[float] = None
    length: int = 400
    sigma2: float = 1.0

    @root_validator(skip_on_failure=True)
    def _kernel_given(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        explicit = values.get("psi") is not None
        family = values.get("scale") is not None and values.get("power") is not None
        if explicit == family:
            raise ValueError("give either psi or (scale, power)")
        if values.get("sigma2", 1.0) <= 0:
            raise ValueError("sigma2 must be positive")
        return values

    def kernel(self) -> np.ndarray:
        if self.psi is not None:
            return np.asarray(self.psi, dtype=float)
        kernel = self.scale * (1.0 + np.arange(self.length + 1, dtype=float)) ** (-self.power)
        kernel[0] = 1.0
        return kernel

    def covariance(self, max_lag: Optional[int]) -> CovarianceSequence:
        kernel = self.kernel()
        lags = max(settings.default_max_lag, kernel.size - 1) if max_lag is None else max_lag
        return acf_from_ma_kernel(kernel, self.sigma2, lags)


class ArrayRhs(BaseModel):
    type: Literal["array"]
    values: List[float]

    def build(self, cov: CovarianceSequence) -> CausalSeq:
        return build_rhs("array", values=self.values)


class CrossCovShiftRhs(BaseModel):
    type: Literal["cross_cov_shift"]
    m: int = Field(..., ge=0)

    def build(self, cov: CovarianceSequence) -> CausalSeq:
        return build_rhs("cross_cov_shift", cov, m=self.m)


class UnitRhs(BaseModel):
    type: Literal["unit"]
    k: int = Field(..., ge=0)

    def build(self, cov: CovarianceSequence) -> CausalSeq:
        return build_rhs("unit", k=self.k)


RhsConfig = Union[ArrayRhs, CrossCovShiftRhs, UnitRhs]


class NumericConfig(BaseModel):
    order: Optional[int] = Field(None, ge=0)
    n_grid: Optional[int] = Field(None, ge=2)
    max_lag: Optional[int] = Field(None, ge=0)
    truncation_length: Optional[int] = Field(None, ge=1)
    dense_n: Optional[int] = Field(None, ge=1)
    factorization_tolerance: Optional[float] = None
    solve_tolerance: Optional[float] = None
    grid_route_tolerance: Optional[float] = None
    window_tail_tolerance: Optional[float] = None
    p_list: Optional[List[int]] = None
    reference_order: Optional[int] = Field(None, ge=1)
    smoothness_k: Optional[float] = None
    method: Optional[str] = None
    route: Literal["coefficient", "grid"] = "coefficient"
    rows: List[int] = [0]
    cols: List[int] = [0]
    m: int = Field(1, ge=1)

    @validator(
        "factorization_tolerance",
        "solve_tolerance",
        "grid_route_tolerance",
        "window_tail_tolerance",
    )
    def _positive_tolerance(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value <= 0:
            raise ValueError("tolerances must be positive")
        return value

    @validator("rows", "cols", each_item=True)
    def _non_negative_index(cls, value: int) -> int:
        if value < 0:
            raise ValueError("row and column indices must be non-negative")
        return value


class OutputConfig(BaseModel):
    path: str = "artifacts"
    format: Literal["csv", "json"] = "csv"


METHODS = {
    "solve": ("classical", "prediction", "oracle"),
    "invert": ("corollary", "dense", "finite", "levinson"),
}


class RunConfig(BaseModel):
    command: Literal["factorize", "solve", "invert", "predict", "approx-study"]
    model: Union[SequenceModel, ArmaModel, MaKernelModel] = Field(..., discriminator="type")
    rhs: Optional[RhsConfig] = None
    numeric: NumericConfig = NumericConfig()
    output: OutputConfig = OutputConfig()

    @root_validator(skip_on_failure=True)
    def _command_requirements(cls, values: Dict[str, Any]) -> Dict[str, Any]:
        command = values["command"]
        numeric: NumericConfig = values["numeric"]
        if command in ("solve", "approx-study") and values.get("rhs") is None:
            raise ValueError(f"command {command!r} needs an rhs block")
        allowed = METHODS.get(command)
        if allowed is not None:
            method = numeric.method or allowed[0]
            if method not in allowed:
                raise ValueError(f"method {method!r} not one of {allowed} for {command!r}")
            values["numeric"] = numeric.copy(update={"method": method})
        return values

    def covariance(self) -> CovarianceSequence:
        return self.model.covariance(self.numeric.max_lag)

    def rhs_sequence(self, cov: CovarianceSequence) -> CausalSeq:
        if self.rhs is None:
            raise ConfigurationError(f"command {self.command!r} needs an rhs block")
        return self.rhs.build(cov)


def _merge(base: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, Mapping):
            merged[key] = _merge(merged.get(key) or {}, value)
        else:
            merged[key] = value
    return merged


def load_run_config(
    path: Union[str, Path], overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """Read a JSON run config; non-None ``overrides`` (nested dicts) win over the file."""

    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read run config {path}: {exc}", path=str(path)) from exc
    if not isinstance(raw, dict):
        raise ConfigurationError(f"run config {path} must be a JSON object", path=str(path))
    try:
        return RunConfig.parse_obj(_merge(raw, overrides or {}))
    except ValidationError as exc:
        raise ConfigurationError(
            f"invalid run config {path}: {exc}", path=str(path), errors=exc.errors()
        ) from exc
