"""Exception hierarchy shared by the library and the command line front-end."""

from __future__ import annotations

from typing import Any, Dict, Optional


class WienerHopfError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for the error."""

    exit_code = 1

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self._details = details

    def details(self) -> Dict[str, Any]:
        return dict(self._details)


class ConfigurationError(WienerHopfError, ValueError):
    exit_code = 2


class DomainError(WienerHopfError, ValueError):
    exit_code = 3


class PositiveDefinitenessError(DomainError):
    """The spectral density is not strictly positive at some grid frequency."""

    def __init__(
        self,
        message: str,
        *,
        omega: Optional[float] = None,
        index: Optional[int] = None,
        value: Optional[float] = None,
    ) -> None:
        super().__init__(message, omega=omega, index=index, value=value)
        self.omega = omega
        self.index = index
        self.value = value


class NonCausalModelError(DomainError):
    def __init__(self, message: str, *, spectral_radius: float) -> None:
        super().__init__(message, spectral_radius=spectral_radius)
        self.spectral_radius = spectral_radius


class GridResolutionError(DomainError):
    def __init__(self, message: str, *, n_grid: int, required: int) -> None:
        super().__init__(message, n_grid=n_grid, required=required)
        self.n_grid = n_grid
        self.required = required


class TruncationError(DomainError):
    def __init__(self, message: str, *, tail_bound: float, tolerance: float) -> None:
        super().__init__(message, tail_bound=tail_bound, tolerance=tolerance)
        self.tail_bound = tail_bound
        self.tolerance = tolerance


class NumericalConsistencyError(WienerHopfError, ArithmeticError):
    exit_code = 4


class FactorizationQualityError(NumericalConsistencyError):
    def __init__(self, message: str, *, residual: float, tolerance: float) -> None:
        super().__init__(message, residual=residual, tolerance=tolerance)
        self.residual = residual
        self.tolerance = tolerance


class ResidualToleranceError(NumericalConsistencyError):
    def __init__(
        self, message: str, *, residual: float, tolerance: float, method: Optional[str] = None
    ) -> None:
        super().__init__(message, residual=residual, tolerance=tolerance, method=method)
        self.residual = residual
        self.tolerance = tolerance
