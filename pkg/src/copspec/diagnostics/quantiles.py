"""Empirical quantile convention used for typical regions and p-value scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError


@dataclass(frozen=True)
class QuantileConvention:
    """Order statistic with linear interpolation at position h = (R - 1) p + 1.

    This is numpy's "linear" method: the minimum at p = 0, the maximum at p = 1,
    continuous and monotone in p.
    """

    method: str = "linear"

    def __call__(self, samples: np.ndarray, p: float, axis: int = 0) -> np.ndarray:
        if not (0.0 <= p <= 1.0):
            raise InvalidInputError(f"quantile level must lie in [0, 1], got {p}")
        return np.quantile(samples, p, axis=axis, method=self.method)


DEFAULT_CONVENTION = QuantileConvention()


def empirical_quantile(samples: np.ndarray, p: float, axis: int = 0) -> np.ndarray:
    return DEFAULT_CONVENTION(samples, p, axis=axis)
