"""Kernel-smoothed copula spectral density estimator.

    f_hat(tau1, tau2, omega) = (2 pi / n) * sum_{s=1}^{n-1} W_n(omega - 2 pi s / n) * I(s)

with I the copula periodogram.  The s = 0 term is excluded because it only
reflects the deterministic counts of the clipped indicators.

All sums use np.einsum with optimize=False so results are bit-identical across
BLAS builds and thread counts.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .kernel import periodized_kernel_weight
from .periodogram import clipped_dfts, rank_transform
from .schema import FrequencyGrid, KernelSpec, QuantileGrid, SpectralMatrix, TimeSeries

logger = logging.getLogger(__name__)


def smoothing_weights(kernel: KernelSpec, omegas: np.ndarray, n: int) -> np.ndarray:
    """W_n(omega_k - 2 pi s / n) for s = 1..n-1, shape (len(omegas), n-1)."""
    s = np.arange(1, n)
    return periodized_kernel_weight(kernel, omegas[:, None] - 2.0 * math.pi * s[None, :] / n)


def _hermitize(values: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """Mirror the lower triangle onto the upper one; zero Im on the diagonal and at omega = 0 mod pi."""
    k = values.shape[0]
    upper_i, upper_j = np.triu_indices(k, 1)
    values[upper_i, upper_j, :] = np.conj(values[upper_j, upper_i, :])
    diag = np.arange(k)
    values[diag, diag, :] = values[diag, diag, :].real
    # f(-omega) = conj f(omega): the estimate is real at multiples of pi
    turns = omegas / math.pi
    real_at = np.isclose(turns, np.round(turns), rtol=0.0, atol=1e-12)
    values[:, :, real_at] = values[:, :, real_at].real
    return values


def estimate_from_ranks(
    ranks: np.ndarray,
    taus: QuantileGrid,
    omegas: FrequencyGrid,
    kernel: KernelSpec,
) -> np.ndarray:
    """Raw (K, K, F) estimate for precomputed normalized ranks."""
    n = ranks.size
    dfts = clipped_dfts(ranks, taus.levels)[:, 1:]
    weights = smoothing_weights(kernel, omegas.omegas, n)
    # (2 pi / n) * W * d1 conj(d2) / (2 pi n) collapses to W * d1 conj(d2) / n^2
    values = np.einsum("ks,is,js->ijk", weights, dfts, np.conj(dfts), optimize=False) / (n * n)
    return _hermitize(values, omegas.omegas)


def smoothed_estimate(
    series: TimeSeries,
    taus: QuantileGrid,
    omegas: FrequencyGrid,
    kernel: KernelSpec,
) -> SpectralMatrix:
    """Estimate the copula spectral density of *series* on the given grids.

    With b * n <= 2 pi the kernel spans at most a couple of Fourier frequencies;
    the estimate is still returned but a warning is logged.

    Usage::

        est = smoothed_estimate(ts, QuantileGrid.plot_default(), FrequencyGrid.fourier(64),
                                KernelSpec(bandwidth=0.1))
        est.at(0.1, 0.9)   # complex values over the frequency grid
    """
    n = series.n
    if kernel.bandwidth * n <= 2.0 * math.pi:
        logger.warning("bandwidth %g spans few Fourier frequencies at n=%d", kernel.bandwidth, n)
    ranks = rank_transform(series)
    values = estimate_from_ranks(ranks, taus, omegas, kernel)
    logger.debug("estimated %dx%dx%d copula spectrum for n=%d", len(taus), len(taus), len(omegas), n)
    return SpectralMatrix(taus, omegas, values)
