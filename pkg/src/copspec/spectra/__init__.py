"""spectra: rank-based copula periodograms and the smoothed spectral estimator."""

from .acf import sample_autocorrelations
from .estimator import estimate_from_ranks, smoothed_estimate
from .kernel import kernel_l2_norm, periodized_kernel_weight
from .periodogram import clipped_dft, clipped_dfts, copula_periodogram, rank_transform
from .schema import (
    MIN_SERIES_LENGTH,
    FrequencyGrid,
    KernelSpec,
    QuantileGrid,
    SpectralMatrix,
    TimeSeries,
)

__all__ = [
    "MIN_SERIES_LENGTH",
    "FrequencyGrid",
    "KernelSpec",
    "QuantileGrid",
    "SpectralMatrix",
    "TimeSeries",
    "clipped_dft",
    "clipped_dfts",
    "copula_periodogram",
    "estimate_from_ranks",
    "kernel_l2_norm",
    "periodized_kernel_weight",
    "rank_transform",
    "sample_autocorrelations",
    "smoothed_estimate",
]
