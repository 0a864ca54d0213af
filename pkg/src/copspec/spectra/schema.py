"""Core data types for copula spectral estimation.

TimeSeries / QuantileGrid / FrequencyGrid / SpectralMatrix are frozen dataclasses
holding read-only numpy arrays.  KernelSpec is a pydantic model because it is
configuration: it is parsed from config files and CLI flags.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from ..errors import InvalidInputError

# Minimum series length accepted by TimeSeries
MIN_SERIES_LENGTH = 8

# Tolerances for the SpectralMatrix symmetry checks
_HERMITIAN_TOL = 1e-10
# Grid lookups: a requested level/frequency matches a grid point within this distance
_GRID_MATCH_TOL = 1e-9


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


# ---------------------------------------------------------------------------
# TimeSeries
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A finite, real-valued observation sequence X_0..X_{n-1} plus a label."""

    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        arr = _frozen_array(self.values, np.float64)
        if arr.ndim != 1:
            raise InvalidInputError(f"TimeSeries values must be 1-D, got shape {arr.shape}")
        if arr.size < MIN_SERIES_LENGTH:
            raise InvalidInputError(
                f"TimeSeries needs at least {MIN_SERIES_LENGTH} observations, got {arr.size}"
            )
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise InvalidInputError(f"TimeSeries value at index {bad} is not finite")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def n(self) -> int:
        return len(self)


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuantileGrid:
    """Strictly increasing quantile levels in the open interval (0, 1)."""

    levels: np.ndarray

    def __post_init__(self) -> None:
        arr = _frozen_array(self.levels, np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("QuantileGrid needs a non-empty 1-D sequence of levels")
        if np.any(arr <= 0.0) or np.any(arr >= 1.0):
            raise InvalidInputError(f"quantile levels must lie in (0, 1): {arr.tolist()}")
        if np.any(np.diff(arr) <= 0.0):
            raise InvalidInputError(f"quantile levels must be strictly increasing: {arr.tolist()}")
        object.__setattr__(self, "levels", arr)

    @classmethod
    def plot_default(cls) -> "QuantileGrid":
        """The {0.1, 0.5, 0.9} levels used for the 3x3 panel display."""
        return cls(np.array([0.1, 0.5, 0.9]))

    @classmethod
    def equispaced(cls, k: int) -> "QuantileGrid":
        """Levels {1/(k+1), ..., k/(k+1)}; k = 19 gives 0.05, 0.10, ..., 0.95."""
        if k < 1:
            raise InvalidInputError(f"k must be >= 1, got {k}")
        return cls(np.arange(1, k + 1) / (k + 1))

    def __len__(self) -> int:
        return int(self.levels.size)

    def index_of(self, tau: float) -> int:
        """Return the grid index of *tau*; raises if the level is not on the grid."""
        hits = np.flatnonzero(np.abs(self.levels - tau) <= _GRID_MATCH_TOL)
        if hits.size == 0:
            raise InvalidInputError(f"quantile level {tau} is not on the grid {self.levels.tolist()}")
        return int(hits[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantileGrid):
            return NotImplemented
        return bool(np.array_equal(self.levels, other.levels))

    def __hash__(self) -> int:
        return hash(self.levels.tobytes())


@dataclass(frozen=True)
class FrequencyGrid:
    """Non-decreasing evaluation frequencies in [0, pi] (radians per step)."""

    omegas: np.ndarray

    def __post_init__(self) -> None:
        arr = _frozen_array(self.omegas, np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("FrequencyGrid needs a non-empty 1-D sequence of frequencies")
        if np.any(arr < 0.0) or np.any(arr > math.pi):
            raise InvalidInputError(f"frequencies must lie in [0, pi]: {arr.tolist()}")
        if np.any(np.diff(arr) < 0.0):
            raise InvalidInputError("frequencies must be non-decreasing")
        object.__setattr__(self, "omegas", arr)

    @classmethod
    def fourier(cls, denominator: int = 64) -> "FrequencyGrid":
        """Frequencies 2*pi*j/denominator for j = 0..denominator//2."""
        if denominator < 2:
            raise InvalidInputError(f"denominator must be >= 2, got {denominator}")
        j = np.arange(denominator // 2 + 1)
        return cls(2.0 * np.pi * j / denominator)

    def __len__(self) -> int:
        return int(self.omegas.size)

    def index_of(self, omega: float) -> int:
        hits = np.flatnonzero(np.abs(self.omegas - omega) <= _GRID_MATCH_TOL)
        if hits.size == 0:
            raise InvalidInputError(f"frequency {omega} is not on the grid")
        return int(hits[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FrequencyGrid):
            return NotImplemented
        return bool(np.array_equal(self.omegas, other.omegas))

    def __hash__(self) -> int:
        return hash(self.omegas.tobytes())


# ---------------------------------------------------------------------------
# KernelSpec
# ---------------------------------------------------------------------------

class KernelSpec(BaseModel):
    """Smoothing kernel W on [-pi, pi] and its bandwidth b_n.

    Only the Epanechnikov kernel is supported; it is normalized as
    W(u) = 3/(4*pi) * (1 - (u/pi)^2) on [-pi, pi] so that it integrates to 1.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["epanechnikov"] = "epanechnikov"
    bandwidth: float = 0.1

    @field_validator("kind", mode="before")
    @classmethod
    def _lower_kind(cls, v: object) -> object:
        return v.strip().lower() if isinstance(v, str) else v

    @field_validator("bandwidth")
    @classmethod
    def _check_bandwidth(cls, v: float) -> float:
        if not (0.0 < v <= math.pi):
            raise ValueError(f"bandwidth must lie in (0, pi], got {v}")
        return v

    def density(self, u: np.ndarray | float) -> np.ndarray:
        """Evaluate the unscaled kernel W(u); zero outside [-pi, pi]."""
        u = np.asarray(u, dtype=np.float64)
        x = u / math.pi
        return np.where(np.abs(x) <= 1.0, (3.0 / (4.0 * math.pi)) * (1.0 - x * x), 0.0)


# ---------------------------------------------------------------------------
# SpectralMatrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectralMatrix:
    """Complex values f_{(tau_i, tau_j)}(omega_k) stored as values[i, j, k].

    Hermitian in the quantile indices with a real diagonal.  Negative
    frequencies are never stored: f(tau1, tau2, -omega) = conj(f(tau1, tau2, omega)).

    ``std_error`` is optional; when present its real part is the standard error of
    Re f and its imaginary part the standard error of Im f.
    """

    tau_grid: QuantileGrid
    freq_grid: FrequencyGrid
    values: np.ndarray
    std_error: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        vals = _frozen_array(self.values, np.complex128)
        k, f = len(self.tau_grid), len(self.freq_grid)
        if vals.shape != (k, k, f):
            raise InvalidInputError(
                f"SpectralMatrix values must have shape {(k, k, f)}, got {vals.shape}"
            )
        asym = np.max(np.abs(vals - np.conj(np.transpose(vals, (1, 0, 2)))))
        if asym > _HERMITIAN_TOL:
            raise InvalidInputError(f"SpectralMatrix is not Hermitian in tau (max deviation {asym:.3g})")
        object.__setattr__(self, "values", vals)
        if self.std_error is not None:
            se = _frozen_array(self.std_error, np.complex128)
            if se.shape != vals.shape:
                raise InvalidInputError("std_error must have the same shape as values")
            object.__setattr__(self, "std_error", se)

    def at(self, tau1: float, tau2: float) -> np.ndarray:
        """Return f_{(tau1, tau2)} over the frequency grid."""
        return self.values[self.tau_grid.index_of(tau1), self.tau_grid.index_of(tau2)]

    def restrict(self, taus: QuantileGrid) -> "SpectralMatrix":
        """Sub-matrix on a subset of the quantile levels."""
        idx = np.array([self.tau_grid.index_of(t) for t in taus.levels])
        se = None if self.std_error is None else self.std_error[np.ix_(idx, idx)]
        return SpectralMatrix(taus, self.freq_grid, self.values[np.ix_(idx, idx)], se)

    def same_grids(self, other: "SpectralMatrix") -> bool:
        return self.tau_grid == other.tau_grid and self.freq_grid == other.freq_grid
