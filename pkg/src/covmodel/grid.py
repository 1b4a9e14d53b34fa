"""Uniform frequency grids and coefficient/grid transforms.

All transforms use the convention ``A(omega) = sum_j a_j exp(i j omega)`` on
``omega_k = 2 pi k / n_grid``; numpy's FFT gives a fixed reduction order, so
repeated evaluations are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from config.settings import settings

from ..errors import GridResolutionError


def next_power_of_two(value: int) -> int:
    return 1 << max(0, int(value) - 1).bit_length()


def default_truncation(max_lag: int, order: int = 0) -> int:
    """L_w = max(min_truncation, truncation_factor * L_c, order)."""

    return max(settings.min_truncation, settings.truncation_factor * max_lag, order)


def default_grid_size(truncation_length: int) -> int:
    return next_power_of_two(settings.grid_factor * max(truncation_length, 1))


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Samples on the uniform grid; ``values`` may be empty for a bare grid."""

    n_grid: int
    values: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self) -> None:
        if self.n_grid < 2 or self.n_grid & (self.n_grid - 1):
            raise ValueError(f"n_grid must be a power of two >= 2, got {self.n_grid}")
        if self.values.size not in (0, self.n_grid):
            raise ValueError("grid values must have exactly n_grid samples")

    @classmethod
    def bare(cls, n_grid: int) -> "SpectralGrid":
        return cls(n_grid=n_grid)

    @property
    def omegas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_grid) / self.n_grid

    @property
    def minimum(self) -> float:
        return float(np.min(np.real(self.values)))

    @property
    def maximum(self) -> float:
        return float(np.max(np.real(self.values)))

    def require(self, length: int) -> None:
        """Aliasing guard: the grid must resolve a sequence of ``length`` terms."""

        if self.n_grid < 2 * length:
            raise GridResolutionError(
                f"n_grid={self.n_grid} cannot resolve a sequence of length {length}",
                n_grid=self.n_grid,
                required=2 * length,
            )

    def with_values(self, values: np.ndarray) -> "SpectralGrid":
        return SpectralGrid(n_grid=self.n_grid, values=np.asarray(values))


def transfer_on_grid(coeffs: np.ndarray, n_grid: int) -> np.ndarray:
    """Samples of ``sum_j a_j exp(i j omega)`` for a causal coefficient array."""

    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size > n_grid:
        raise GridResolutionError(
            f"{coeffs.size} coefficients exceed n_grid={n_grid}",
            n_grid=n_grid,
            required=coeffs.size,
        )
    return n_grid * np.fft.ifft(coeffs, n=n_grid)


def conjugate_transfer_on_grid(coeffs: np.ndarray, n_grid: int) -> np.ndarray:
    """Samples of ``sum_j a_j exp(-i j omega)`` (real coefficients)."""

    return np.conj(transfer_on_grid(coeffs, n_grid))


def coefficients_from_grid(samples: np.ndarray, length: int) -> np.ndarray:
    """Inverse of :func:`transfer_on_grid`, real part of the first ``length`` terms."""

    samples = np.asarray(samples)
    return np.real(np.fft.fft(samples))[:length] / samples.size


def exp_on_grid(shift: int, n_grid: int) -> np.ndarray:
    """Samples of ``exp(i shift omega)``."""

    return np.exp(1j * shift * 2.0 * np.pi * np.arange(n_grid) / n_grid)
