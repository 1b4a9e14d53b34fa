from dataclasses import dataclass
from typing import Dict

import numpy as np
import pytest

from src.covmodel import (
    CovarianceSequence,
    WoldFactorization,
    acf_from_arma,
    acf_from_ma_kernel,
    wold_from_covariance,
)

FIXTURE_NAMES = ["white_noise", "ar1", "ar2", "ma1", "arma11", "polynomial"]
MAX_LAG = 64
WHITE_NOISE_VARIANCE = 2.0


@dataclass(frozen=True, eq=False)
class Case:
    name: str
    cov: CovarianceSequence
    wold: WoldFactorization


def polynomial_kernel(length: int = 400, power: float = 5.0, scale: float = 0.5) -> np.ndarray:
    """psi_0 = 1, psi_j = scale (1 + j)^-power; sum_{j>=1} |psi_j| < 1 keeps it minimum phase."""

    kernel = scale * (1.0 + np.arange(length + 1, dtype=float)) ** (-power)
    kernel[0] = 1.0
    return kernel


def build_covariance(name: str) -> CovarianceSequence:
    if name == "white_noise":
        return CovarianceSequence(np.array([WHITE_NOISE_VARIANCE]))
    if name == "ar1":
        return acf_from_arma([0.5], [], 1.0, MAX_LAG)
    if name == "ar2":
        return acf_from_arma([0.5, -0.3], [], 1.0, MAX_LAG)
    if name == "ma1":
        return acf_from_arma([], [0.4], 1.0, MAX_LAG)
    if name == "arma11":
        return acf_from_arma([0.5], [0.4], 1.0, MAX_LAG)
    if name == "polynomial":
        kernel = polynomial_kernel()
        return acf_from_ma_kernel(kernel, 1.0, kernel.size - 1)
    raise KeyError(name)


def build_case(name: str) -> Case:
    cov = build_covariance(name)
    # the slowly decaying kernel needs a longer AR fit to reach 1e-8 identities
    order = min(cov.truncation_length, 128)
    return Case(name=name, cov=cov, wold=wold_from_covariance(cov, order))


_CASES: Dict[str, Case] = {}


def get_case(name: str) -> Case:
    if name not in _CASES:
        _CASES[name] = build_case(name)
    return _CASES[name]


@pytest.fixture(scope="module", params=FIXTURE_NAMES)
def case(request) -> Case:
    return get_case(request.param)


@pytest.fixture(scope="module")
def white() -> Case:
    return get_case("white_noise")


@pytest.fixture(scope="module")
def ar1() -> Case:
    return get_case("ar1")


@pytest.fixture(scope="module")
def ar2() -> Case:
    return get_case("ar2")


@pytest.fixture(scope="module")
def ma1() -> Case:
    return get_case("ma1")


@pytest.fixture(scope="module")
def arma11() -> Case:
    return get_case("arma11")


@pytest.fixture(scope="module")
def polynomial() -> Case:
    return get_case("polynomial")
