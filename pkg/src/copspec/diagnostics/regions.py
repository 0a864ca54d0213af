"""Pointwise typical regions from a bootstrap ensemble, and coverage of an estimate."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..spectra.schema import FrequencyGrid, QuantileGrid, SpectralMatrix
from .ensemble import BootstrapEnsemble
from .quantiles import DEFAULT_CONVENTION, QuantileConvention

logger = logging.getLogger(__name__)


def _frozen(arr: np.ndarray, dtype=np.float64) -> np.ndarray:
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class TypicalRegions:
    """Lower/upper bounds per (tau pair, omega), separately for Re and Im.

    All four arrays have shape (K, K, F) on ``tau_grid`` x ``tau_grid`` x ``freq_grid``.
    """

    tau_grid: QuantileGrid
    freq_grid: FrequencyGrid
    lower_re: np.ndarray
    upper_re: np.ndarray
    lower_im: np.ndarray
    upper_im: np.ndarray
    alpha: float

    def __post_init__(self) -> None:
        shape = (len(self.tau_grid), len(self.tau_grid), len(self.freq_grid))
        for name in ("lower_re", "upper_re", "lower_im", "upper_im"):
            arr = _frozen(getattr(self, name))
            if arr.shape != shape:
                raise InvalidInputError(f"{name} must have shape {shape}, got {arr.shape}")
            object.__setattr__(self, name, arr)
        if np.any(self.lower_re > self.upper_re) or np.any(self.lower_im > self.upper_im):
            raise InvalidInputError("typical region lower bound exceeds upper bound")

    @property
    def center(self) -> np.ndarray:
        """Complex midpoint of the Re and Im intervals."""
        return 0.5 * (self.lower_re + self.upper_re) + 0.5j * (self.lower_im + self.upper_im)

    def restrict(self, taus: QuantileGrid) -> "TypicalRegions":
        idx = np.array([self.tau_grid.index_of(t) for t in taus.levels])
        sel = np.ix_(idx, idx)
        return TypicalRegions(
            taus, self.freq_grid,
            self.lower_re[sel], self.upper_re[sel], self.lower_im[sel], self.upper_im[sel],
            self.alpha,
        )


@dataclass(frozen=True, eq=False)
class CoverageField:
    """Booleans per (tau pair, omega): True where the estimate lies inside the region."""

    tau_grid: QuantileGrid
    freq_grid: FrequencyGrid
    re: np.ndarray
    im: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", _frozen(self.re, bool))
        object.__setattr__(self, "im", _frozen(self.im, bool))


def regions_from_replicates(
    replicates: np.ndarray,
    tau_grid: QuantileGrid,
    freq_grid: FrequencyGrid,
    alpha: float,
    convention: QuantileConvention = DEFAULT_CONVENTION,
) -> TypicalRegions:
    """Quantiles alpha/2 and 1 - alpha/2 over axis 0 of an (R, K, K, F) complex array."""
    if not (0.0 < alpha < 1.0):
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha}")
    lo, hi = alpha / 2.0, 1.0 - alpha / 2.0
    re, im = replicates.real, replicates.imag
    return TypicalRegions(
        tau_grid,
        freq_grid,
        lower_re=convention(re, lo),
        upper_re=convention(re, hi),
        lower_im=convention(im, lo),
        upper_im=convention(im, hi),
        alpha=float(alpha),
    )


def typical_regions(
    ensemble: BootstrapEnsemble,
    alpha: float,
    convention: QuantileConvention = DEFAULT_CONVENTION,
) -> TypicalRegions:
    """Pointwise (1 - alpha) typical regions of the bootstrap replicates.

    Usage::

        regions = typical_regions(ens, alpha=0.05)
        covered = coverage_indicator(ens.config.estimate(ts), regions)
    """
    regions = regions_from_replicates(
        ensemble.replicates, ensemble.tau_grid, ensemble.freq_grid, alpha, convention
    )
    logger.debug("typical regions at alpha=%g from %d replicates", alpha, ensemble.R)
    return regions


def coverage_indicator(estimate: SpectralMatrix, regions: TypicalRegions) -> CoverageField:
    """l <= value <= u, inclusive, for the real and imaginary parts separately."""
    if estimate.tau_grid != regions.tau_grid or estimate.freq_grid != regions.freq_grid:
        raise InvalidInputError("estimate and typical regions are on different grids")
    re, im = estimate.values.real, estimate.values.imag
    return CoverageField(
        regions.tau_grid,
        regions.freq_grid,
        re=(regions.lower_re <= re) & (re <= regions.upper_re),
        im=(regions.lower_im <= im) & (im <= regions.upper_im),
    )
