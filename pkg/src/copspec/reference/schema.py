"""Lag-copula tables and asymptotic covariance results."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..spectra.schema import QuantileGrid


@dataclass(frozen=True, eq=False)
class LagCopulaTable:
    """C_h(tau_i, tau_j) for 0 <= h <= max_lag on one quantile grid.

    Only non-negative lags are stored; negative lags follow from the reflection
    C_{-h}(tau1, tau2) = C_h(tau2, tau1), so that identity holds exactly.
    """

    tau_grid: QuantileGrid
    values: np.ndarray  # shape (max_lag + 1, K, K), values[h, i, j] = C_h(tau_i, tau_j)

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=np.float64, copy=True)
        k = len(self.tau_grid)
        if vals.ndim != 3 or vals.shape[1:] != (k, k):
            raise InvalidInputError(f"lag copula values must have shape (H+1, {k}, {k}), got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def max_lag(self) -> int:
        return self.values.shape[0] - 1

    def at(self, h: int) -> np.ndarray:
        """C_h on the grid for -max_lag <= h <= max_lag."""
        if abs(h) > self.max_lag:
            raise InvalidInputError(f"lag {h} outside [-{self.max_lag}, {self.max_lag}]")
        return self.values[h] if h >= 0 else self.values[-h].T

    def with_margins(self, h: int) -> tuple[np.ndarray, np.ndarray]:
        """C_h on the grid extended by the levels 0 and 1, where C(0, .) = 0 and C(1, t) = t."""
        levels = np.concatenate([[0.0], self.tau_grid.levels, [1.0]])
        k = levels.size
        ext = np.zeros((k, k))
        ext[-1, :] = levels
        ext[:, -1] = levels
        ext[1:-1, 1:-1] = self.at(h)
        return levels, ext


@dataclass(frozen=True, eq=False)
class AsymptoticCov:
    """Cov(H0(a; omega), H0(b; omega)) = E[H0(a) conj(H0(b))] over the listed tau pairs."""

    pairs: tuple[tuple[float, float], ...]
    omega: float
    matrix: np.ndarray  # complex, shape (len(pairs), len(pairs))

    def variance(self, pair: tuple[float, float]) -> float:
        i = self.pairs.index(pair)
        return float(self.matrix[i, i].real)
