from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class CausalSeq:
    """One-sided sequence v_0..v_L (zero beyond L)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float).ravel())

    @property
    def length(self) -> int:
        return self.values.size

    @property
    def energy(self) -> float:
        return float(np.dot(self.values, self.values))

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length)
        keep = min(length, self.values.size)
        out[:keep] = self.values[:keep]
        return out

    @classmethod
    def of(cls, values: Sequence[float]) -> "CausalSeq":
        return cls(np.asarray(values, dtype=float))


@dataclass(frozen=True, eq=False)
class BiSeq:
    """Bi-infinite sequence split as ``neg`` (indices -1, -2, ...) and ``pos`` (0, 1, ...)."""

    neg: np.ndarray
    pos: CausalSeq

    def __post_init__(self) -> None:
        object.__setattr__(self, "neg", np.asarray(self.neg, dtype=float).ravel())

    @classmethod
    def from_full(cls, values: np.ndarray, zero_index: int) -> "BiSeq":
        """Split an array whose entry ``zero_index`` holds index 0."""

        values = np.asarray(values, dtype=float)
        return cls(neg=values[:zero_index][::-1], pos=CausalSeq(values[zero_index:]))

    def to_full(self) -> np.ndarray:
        """Concatenate back as (..., v_-2, v_-1, v_0, v_1, ...)."""

        return np.concatenate((self.neg[::-1], self.pos.values))


@dataclass(frozen=True, eq=False)
class TwoSidedSeq:
    """Finite two-sided sequence a_j, j in [-J, J]; ``values[J + j]`` holds a_j."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size % 2 == 0:
            raise ValueError("two-sided sequence needs an odd number of entries")
        object.__setattr__(self, "values", values)

    @property
    def half_width(self) -> int:
        return self.values.size // 2

    def at(self, j: int) -> float:
        J = self.half_width
        return float(self.values[J + j]) if -J <= j <= J else 0.0

    @classmethod
    def delta(cls, j: int, half_width: int = 0) -> "TwoSidedSeq":
        width = max(half_width, abs(j))
        values = np.zeros(2 * width + 1)
        values[width + j] = 1.0
        return cls(values)


def causal_part(seq: BiSeq) -> CausalSeq:
    """[A]_+ : restriction to non-negative indices."""

    return CausalSeq(seq.pos.values.copy())


def anticausal_part(seq: BiSeq) -> np.ndarray:
    """[A]_- : entries at indices -1, -2, ... in that order."""

    return seq.neg.copy()
