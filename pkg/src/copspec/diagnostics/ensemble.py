"""Parametric bootstrap: fit once, simulate R replicates, estimate each one."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, field_validator

from ..errors import InvalidInputError, ReplicateError
from ..fitting.dispatch import fit_class
from ..fitting.result import FitResult
from ..models.simulate import DEFAULT_BURN_IN, SimConfig, simulate_values
from ..models.spec import ModelSpec
from ..spectra.estimator import estimate_from_ranks, smoothed_estimate
from ..spectra.periodogram import rank_transform
from ..spectra.schema import FrequencyGrid, KernelSpec, QuantileGrid, SpectralMatrix, TimeSeries

logger = logging.getLogger(__name__)


class EstimatorConfig(BaseModel):
    """Grids and kernel shared by the data estimate and every replicate."""

    model_config = ConfigDict(frozen=True)

    taus: tuple[float, ...] = (0.1, 0.5, 0.9)
    omegas: tuple[float, ...] = tuple(FrequencyGrid.fourier(64).omegas.tolist())
    kernel: KernelSpec = KernelSpec()

    @field_validator("taus")
    @classmethod
    def _valid_taus(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        QuantileGrid(np.array(v))
        return v

    @field_validator("omegas")
    @classmethod
    def _valid_omegas(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        FrequencyGrid(np.array(v))
        return v

    @property
    def tau_grid(self) -> QuantileGrid:
        return QuantileGrid(np.array(self.taus))

    @property
    def freq_grid(self) -> FrequencyGrid:
        return FrequencyGrid(np.array(self.omegas))

    def estimate(self, series: TimeSeries) -> SpectralMatrix:
        return smoothed_estimate(series, self.tau_grid, self.freq_grid, self.kernel)


@dataclass(frozen=True, eq=False)
class BootstrapEnsemble:
    """R replicate estimates under the fitted model, plus how they were produced."""

    fitted: FitResult
    replicates: np.ndarray  # complex, shape (R, K, K, F)
    config: EstimatorConfig
    seed: int

    def __post_init__(self) -> None:
        reps = np.array(self.replicates, dtype=np.complex128, copy=True)
        k, f = len(self.config.taus), len(self.config.omegas)
        if reps.ndim != 4 or reps.shape[1:] != (k, k, f):
            raise InvalidInputError(f"replicates must have shape (R, {k}, {k}, {f}), got {reps.shape}")
        if reps.shape[0] < 2:
            raise InvalidInputError(f"an ensemble needs R >= 2 replicates, got {reps.shape[0]}")
        reps.setflags(write=False)
        object.__setattr__(self, "replicates", reps)

    @property
    def R(self) -> int:
        return int(self.replicates.shape[0])

    @cached_property
    def tau_grid(self) -> QuantileGrid:
        return self.config.tau_grid

    @cached_property
    def freq_grid(self) -> FrequencyGrid:
        return self.config.freq_grid

    def replicate(self, r: int) -> SpectralMatrix:
        return SpectralMatrix(self.tau_grid, self.freq_grid, self.replicates[r])

    def restrict(self, taus: QuantileGrid) -> "BootstrapEnsemble":
        """The same ensemble on a subset of its quantile levels."""
        idx = np.array([self.tau_grid.index_of(t) for t in taus.levels])
        config = self.config.model_copy(update={"taus": tuple(self.config.taus[i] for i in idx)})
        return BootstrapEnsemble(self.fitted, self.replicates[:, idx][:, :, idx], config, self.seed)


def _one_replicate(
    spec: ModelSpec, n: int, r: int, seed: int, burn_in: int, configs: tuple[EstimatorConfig, ...]
) -> list[np.ndarray]:
    try:
        values = simulate_values(spec, SimConfig(n=n, burn_in=burn_in, seed=seed, replicate_index=r))
        ranks = rank_transform(values)
        out = [estimate_from_ranks(ranks, c.tau_grid, c.freq_grid, c.kernel) for c in configs]
    except Exception as exc:
        raise ReplicateError(r, exc) from exc
    logger.debug("replicate %d done", r)
    return out


def bootstrap_replicates(
    spec: ModelSpec,
    n: int,
    R: int,
    configs: tuple[EstimatorConfig, ...],
    seed: int,
    *,
    burn_in: int = DEFAULT_BURN_IN,
    n_jobs: int = 1,
) -> list[np.ndarray]:
    """Estimate R simulated paths of *spec* under each config; one (R, K, K, F) array per config.

    Replicate r uses stream (seed, r) whatever n_jobs is, and results are collected
    in replicate order.
    """
    if R < 2:
        raise InvalidInputError(f"R must be >= 2, got {R}")
    per_replicate = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_one_replicate)(spec, n, r, seed, burn_in, configs) for r in range(R)
    )
    return [np.stack([rep[c] for rep in per_replicate]) for c in range(len(configs))]


def run_parametric_bootstrap(
    data: TimeSeries,
    model_class: str,
    R: int,
    config: EstimatorConfig,
    seed: int,
    *,
    p: int = 0,
    q: int = 0,
    burn_in: int = DEFAULT_BURN_IN,
    n_jobs: int = 1,
    fitted: FitResult | None = None,
) -> BootstrapEnsemble:
    """Fit *model_class* to *data* and build an R-replicate bootstrap ensemble.

    A precomputed *fitted* result skips the fit.

    Usage::

        ens = run_parametric_bootstrap(ts, "garch11", R=1000, config=EstimatorConfig(), seed=1)
        regions = typical_regions(ens, alpha=0.05)
    """
    if R < 2:
        raise InvalidInputError(f"R must be >= 2, got {R}")
    if fitted is None:
        fitted = fit_class(data, model_class, p, q, n_jobs=n_jobs)
    logger.info("bootstrap: %d replicates of %s (n=%d, seed=%d)", R, fitted.spec, data.n, seed)
    (replicates,) = bootstrap_replicates(
        fitted.spec, data.n, R, (config,), seed, burn_in=burn_in, n_jobs=n_jobs
    )
    logger.info("bootstrap finished")
    return BootstrapEnsemble(fitted=fitted, replicates=replicates, config=config, seed=seed)
