"""Sample autocorrelations of a series or of its squares."""

from __future__ import annotations

import numpy as np

from ..errors import InvalidInputError
from .schema import TimeSeries


def sample_autocorrelations(
    series: TimeSeries, max_lag: int = 20, squared: bool = False
) -> np.ndarray:
    """Biased sample ACF (denominator n) at lags 1..max_lag.

    With ``squared=True`` the ACF of X_t^2 is returned instead; returns of
    GARCH-type data look uncorrelated while their squares do not.
    """
    if not (1 <= max_lag < series.n):
        raise InvalidInputError(f"max_lag must lie in [1, {series.n - 1}], got {max_lag}")
    x = series.values * series.values if squared else series.values
    centered = x - x.mean()
    denom = float(np.dot(centered, centered))
    if denom == 0.0:
        raise InvalidInputError("autocorrelations are undefined for a constant series")
    n = x.size
    return np.array(
        [np.dot(centered[h:], centered[: n - h]) / denom for h in range(1, max_lag + 1)]
    )
