"""Uniform-in-tau bootstrap p-values.

For every frequency the replicates are centred and scaled per (tau pair, part)
by the beta/2 and 1 - beta/2 quantiles; each replicate contributes one
max-statistic over all tau pairs and both parts, and the data's scaled
deviation at a tau pair is compared with that null sample:

    p = #{r : max(A_r^Re, A_r^Im) >= E} / R
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidInputError
from ..spectra.schema import FrequencyGrid, QuantileGrid, SpectralMatrix
from .ensemble import BootstrapEnsemble
from .quantiles import DEFAULT_CONVENTION, QuantileConvention

logger = logging.getLogger(__name__)

DEFAULT_BETA = 0.1
# Additive guard on the imaginary half-width where the band collapses (e.g. the real diagonal)
IM_WIDTH_GUARD = 1e-6
# Floor on the real half-width; only reached in degenerate ensembles
RE_WIDTH_FLOOR = 1e-12


def _frozen(arr: np.ndarray, dtype=np.float64) -> np.ndarray:
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class PValueField:
    """p-values and deviation signs per (tau pair, omega), plus p_min per omega.

    ``p_re`` / ``p_im`` / ``sign_re`` / ``sign_im`` have shape (K, K, F);
    ``p_min`` has shape (F,).  ``warnings`` lists recoverable degeneracies hit
    while computing the field.
    """

    tau_grid: QuantileGrid
    freq_grid: FrequencyGrid
    p_re: np.ndarray
    p_im: np.ndarray
    sign_re: np.ndarray
    sign_im: np.ndarray
    p_min: np.ndarray
    R: int
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in ("p_re", "p_im", "p_min"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        for name in ("sign_re", "sign_im"):
            object.__setattr__(self, name, _frozen(getattr(self, name), np.int8))

    def at(self, omega: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(p_re, p_im, sign_re, sign_im) at one frequency, each (K, K)."""
        k = self.freq_grid.index_of(omega)
        return self.p_re[..., k], self.p_im[..., k], self.sign_re[..., k], self.sign_im[..., k]


def bootstrap_pvalue(max_stats: np.ndarray, E: np.ndarray | float) -> np.ndarray:
    """#{r : max_stats[r] >= E} / R, vectorized over E."""
    stats = np.sort(np.asarray(max_stats, dtype=np.float64))
    E = np.asarray(E, dtype=np.float64)
    count = stats.size - np.searchsorted(stats, E, side="left")
    return count / stats.size


def _sign(x: np.ndarray) -> np.ndarray:
    return np.where(x < 0.0, -1, 1).astype(np.int8)


def uniform_pvalues(
    ensemble: BootstrapEnsemble,
    data_estimate: SpectralMatrix,
    beta: float = DEFAULT_BETA,
    convention: QuantileConvention = DEFAULT_CONVENTION,
) -> PValueField:
    """Uniform-in-tau p-values of *data_estimate* against *ensemble*.

    The tau set is the ensemble's quantile grid; *data_estimate* must share both
    grids.  The result does not depend on the order of the replicates.

    Usage::

        field = uniform_pvalues(ens, ens.config.estimate(ts), beta=0.1)
        worst = field.p_min.min()
    """
    if not (0.0 < beta < 1.0):
        raise InvalidInputError(f"beta must lie in (0, 1), got {beta}")
    if data_estimate.tau_grid != ensemble.tau_grid or data_estimate.freq_grid != ensemble.freq_grid:
        raise InvalidInputError("data estimate and bootstrap ensemble are on different grids")

    reps = ensemble.replicates
    R = ensemble.R
    lo, hi = beta / 2.0, 1.0 - beta / 2.0
    notes: list[str] = []

    def scale(part: np.ndarray, name: str) -> tuple[np.ndarray, np.ndarray]:
        lower, upper = convention(part, lo), convention(part, hi)
        center = 0.5 * (upper + lower)
        width = 0.5 * (upper - lower)
        if name == "Im":
            width = np.where(upper == lower, width + IM_WIDTH_GUARD, width)
        else:
            degenerate = int(np.count_nonzero(width < RE_WIDTH_FLOOR))
            if degenerate:
                msg = f"Re half-width below {RE_WIDTH_FLOOR:g} at {degenerate} points; clamped"
                logger.warning(msg)
                notes.append(msg)
                width = np.maximum(width, RE_WIDTH_FLOOR)
        return center, width

    c_re, w_re = scale(reps.real, "Re")
    c_im, w_im = scale(reps.imag, "Im")

    # A_r: max over tau pairs, per replicate and frequency -> (R, F)
    a_re = np.max(np.abs(reps.real - c_re) / w_re, axis=(1, 2))
    a_im = np.max(np.abs(reps.imag - c_im) / w_im, axis=(1, 2))
    max_stats = np.maximum(a_re, a_im)

    dev_re = data_estimate.values.real - c_re
    dev_im = data_estimate.values.imag - c_im
    e_re = np.abs(dev_re) / w_re
    e_im = np.abs(dev_im) / w_im

    p_re = np.empty_like(e_re)
    p_im = np.empty_like(e_im)
    for k in range(len(ensemble.freq_grid)):
        p_re[..., k] = bootstrap_pvalue(max_stats[:, k], e_re[..., k])
        p_im[..., k] = bootstrap_pvalue(max_stats[:, k], e_im[..., k])
    p_min = np.minimum(p_re.min(axis=(0, 1)), p_im.min(axis=(0, 1)))

    logger.debug("p-values from %d replicates; smallest p_min %g", R, float(p_min.min()))
    return PValueField(
        ensemble.tau_grid,
        ensemble.freq_grid,
        p_re=p_re,
        p_im=p_im,
        sign_re=_sign(dev_re),
        sign_im=_sign(dev_im),
        p_min=p_min,
        R=R,
        warnings=tuple(notes),
    )
