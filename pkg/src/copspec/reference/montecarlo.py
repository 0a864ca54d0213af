"""Monte-Carlo copula spectra for models without a closed form."""

from __future__ import annotations

import logging
import math

import numpy as np
from joblib import Parallel, delayed

from ..errors import InvalidInputError, PreconditionError
from ..models.simulate import DEFAULT_BURN_IN, SimConfig, simulate_values
from ..models.spec import ModelSpec, check_admissible, format_model_spec
from ..spectra.periodogram import clipped_indicators, rank_transform
from ..spectra.schema import FrequencyGrid, QuantileGrid, SpectralMatrix, TimeSeries
from .gaussian import spectrum_from_lag_copulas
from .schema import LagCopulaTable

logger = logging.getLogger(__name__)

DEFAULT_SEGMENTS = 20


def lag_copulas_from_ranks(ranks: np.ndarray, taus: QuantileGrid, max_lag: int) -> LagCopulaTable:
    """Empirical C_h(tau1, tau2) = mean_t 1{U_{t+h} <= tau1} 1{U_t <= tau2}, h = 0..max_lag.

    Products of 0/1 indicators sum to integers, so the matrix products are
    exact whatever the BLAS summation order.
    """
    m = ranks.size
    if not (0 <= max_lag < m):
        raise InvalidInputError(f"max_lag must lie in [0, {m - 1}], got {max_lag}")
    ind = clipped_indicators(ranks, taus.levels)
    values = np.empty((max_lag + 1, len(taus), len(taus)))
    for h in range(max_lag + 1):
        values[h] = ind[:, h:] @ ind[:, : m - h].T / (m - h)
    return LagCopulaTable(taus, values)


def empirical_lag_copulas(series: TimeSeries, taus: QuantileGrid, max_lag: int) -> LagCopulaTable:
    """Rank-based lag copulas of one observed series."""
    return lag_copulas_from_ranks(rank_transform(series), taus, max_lag)


def mc_copula_spectrum(
    spec: ModelSpec,
    taus: QuantileGrid,
    omegas: FrequencyGrid,
    max_lag: int,
    sim_length: int = 10**6,
    seed: int = 0,
    *,
    n_segments: int = DEFAULT_SEGMENTS,
    burn_in: int = DEFAULT_BURN_IN,
    n_jobs: int = 1,
) -> SpectralMatrix:
    """Copula spectrum of *spec* from a long simulated path.

    The path is split into ``n_segments`` independently seeded segments
    (streams (seed, segment)); ranks are taken over the whole path.  The point
    estimate is the mean of the per-segment truncated sums and ``std_error`` holds
    their standard deviation divided by sqrt(n_segments), separately for the real
    and imaginary parts.
    """
    verdict = check_admissible(spec)
    if not verdict:
        raise PreconditionError(f"{format_model_spec(spec)} is not admissible: {verdict.message}")
    if max_lag < 0:
        raise InvalidInputError(f"max_lag must be >= 0, got {max_lag}")
    if sim_length < 100 * max(max_lag, 1):
        raise PreconditionError(f"sim_length {sim_length} must be at least 100 * max_lag = {100 * max_lag}")
    if n_segments < 2:
        raise InvalidInputError(f"n_segments must be >= 2, got {n_segments}")
    seg_len = sim_length // n_segments
    if seg_len <= max_lag:
        raise PreconditionError(f"segments of length {seg_len} are too short for max_lag {max_lag}")

    segments = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(simulate_values)(spec, SimConfig(n=seg_len, burn_in=burn_in, seed=seed, replicate_index=s))
        for s in range(n_segments)
    )
    ranks = rank_transform(np.concatenate(segments)).reshape(n_segments, seg_len)

    per_segment = np.stack([
        spectrum_from_lag_copulas(lag_copulas_from_ranks(ranks[s], taus, max_lag), omegas).values
        for s in range(n_segments)
    ])
    point = per_segment.mean(axis=0)
    scale = math.sqrt(n_segments)
    se = (per_segment.real.std(axis=0, ddof=1) + 1j * per_segment.imag.std(axis=0, ddof=1)) / scale
    logger.info(
        "MC copula spectrum of %s: %d x %d steps, H=%d", format_model_spec(spec), n_segments, seg_len, max_lag
    )
    return SpectralMatrix(taus, omegas, point, std_error=se)
