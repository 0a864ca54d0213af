"""RunConfig: every knob of a CLI run, merged from flags, a config file and the environment.

Precedence, highest first::

    command-line flag  >  config file (key = value)  >  COPSPEC_* environment  >  default

The config file is flat ``key = value`` text with ``#`` comments, read with
python-dotenv.  ``.env`` in the working directory is loaded into the
environment first (existing variables win).
"""

from __future__ import annotations

import logging
import os
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import numpy as np
from dotenv import dotenv_values, find_dotenv, load_dotenv
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from ..diagnostics.ensemble import EstimatorConfig
from ..errors import ConfigError
from ..models.scenarios import check_model_class
from ..spectra.schema import FrequencyGrid, KernelSpec, QuantileGrid

logger = logging.getLogger(__name__)

ENV_PREFIX = "COPSPEC_"

_GRID_TAUS = (0.1, 0.5, 0.9)
_PVALUE_TAUS = tuple(QuantileGrid.equispaced(19).levels.tolist())


def _split_list(v: object) -> object:
    if isinstance(v, str):
        parts = [p.strip() for p in v.replace(";", ",").split(",")]
        return tuple(float(p) for p in parts if p)
    return v


class RunConfig(BaseModel):
    """Validated run configuration; field names double as config-file keys."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    input: Path | None = None
    log_returns: bool = False
    taus: tuple[float, ...] = _GRID_TAUS               # grid plots and typical regions
    pvalue_taus: tuple[float, ...] = _PVALUE_TAUS      # the uniform p-value set
    freq_denominator: int = 64                         # omegas 2 pi j / d, j = 0..d/2
    kernel: str = "epanechnikov"
    bandwidth: float = 0.1
    model_class: str = "ar"
    p: int = 1
    q: int = 0
    R: int = 1000
    alpha: float = 0.05
    beta: float = 0.1
    seed: int = 0
    burn_in: int = 1000
    n_jobs: int = 1
    fixed_ylim: bool = False
    output_dir: Path = Path("out")

    @field_validator("taus", "pvalue_taus", mode="before")
    @classmethod
    def _parse_levels(cls, v: object) -> object:
        return _split_list(v)

    @field_validator("taus", "pvalue_taus")
    @classmethod
    def _check_levels(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        QuantileGrid(np.array(v))
        return v

    @field_validator("model_class")
    @classmethod
    def _check_class(cls, v: str) -> str:
        return check_model_class(v)

    @field_validator("freq_denominator")
    @classmethod
    def _check_denominator(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"freq_denominator must be >= 2, got {v}")
        return v

    @field_validator("R")
    @classmethod
    def _check_R(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"R must be >= 2, got {v}")
        return v

    @field_validator("alpha", "beta")
    @classmethod
    def _check_level(cls, v: float) -> float:
        if not (0.0 < v < 1.0):
            raise ValueError(f"level must lie in (0, 1), got {v}")
        return v

    @field_validator("p", "q", "burn_in")
    @classmethod
    def _check_non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError(f"must be >= 0, got {v}")
        return v

    @field_validator("seed")
    @classmethod
    def _check_seed(cls, v: int) -> int:
        if not (0 <= v < 2**64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {v}")
        return v

    @model_validator(mode="after")
    def _check_kernel(self) -> "RunConfig":
        KernelSpec(kind=self.kernel, bandwidth=self.bandwidth)
        return self

    # -----------------------------------------------------------------------
    # Derived objects
    # -----------------------------------------------------------------------

    @property
    def kernel_spec(self) -> KernelSpec:
        return KernelSpec(kind=self.kernel, bandwidth=self.bandwidth)

    @property
    def freq_grid(self) -> FrequencyGrid:
        return FrequencyGrid.fourier(self.freq_denominator)

    @property
    def tau_grid(self) -> QuantileGrid:
        return QuantileGrid(np.array(self.taus))

    def estimator_config(self, taus: tuple[float, ...] | None = None) -> EstimatorConfig:
        return EstimatorConfig(
            taus=taus or self.taus,
            omegas=tuple(self.freq_grid.omegas.tolist()),
            kernel=self.kernel_spec,
        )


def _environment() -> dict[str, str]:
    load_dotenv(find_dotenv(usecwd=True))
    out = {}
    for name in RunConfig.model_fields:
        value = os.environ.get(ENV_PREFIX + name.upper())
        if value is not None:
            out[name] = value
    return out


def read_config_file(path: Path) -> dict[str, str]:
    """Key/value pairs of a flat config file; unknown keys raise ConfigError."""
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = {k.strip(): v for k, v in dotenv_values(path).items() if v is not None}
    unknown = sorted(set(values) - set(RunConfig.model_fields))
    if unknown:
        raise ConfigError(f"unknown config key(s) in {path}: {', '.join(unknown)}")
    return values


def load_run_config(
    config_path: Path | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Merge environment, config file and flag *overrides* (None values are ignored).

    Usage::

        cfg = load_run_config(Path("run.cfg"), {"seed": 7, "R": None})
        cfg.estimator_config()
    """
    merged: dict[str, Any] = _environment()
    if config_path is not None:
        merged.update(read_config_file(config_path))
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        cfg = RunConfig.model_validate(merged)
    except (ValidationError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    logger.debug("run config: %s", cfg.model_dump(mode="json"))
    return cfg
