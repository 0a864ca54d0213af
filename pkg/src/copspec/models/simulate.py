"""Simulate the parametric model classes from replicate-indexed streams."""

from __future__ import annotations

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import signal

from ..errors import PreconditionError
from ..spectra.schema import MIN_SERIES_LENGTH, TimeSeries
from .spec import (
    ARCH1Spec,
    ARMASpec,
    ARSpec,
    EGARCH11Spec,
    GARCH11Spec,
    ModelSpec,
    ar_polynomial,
    check_admissible,
    format_model_spec,
    ma_polynomial,
)
from .streams import derive_stream

logger = logging.getLogger(__name__)

DEFAULT_BURN_IN = 1000
_ABS_Z_MEAN = math.sqrt(2.0 / math.pi)  # E|Z| for Z ~ N(0, 1)


class SimConfig(BaseModel):
    """Length, burn-in and stream key of one simulated path."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=MIN_SERIES_LENGTH)
    burn_in: int = Field(default=DEFAULT_BURN_IN, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    replicate_index: int = Field(default=0, ge=0)


def _linear_path(ar: tuple[float, ...], ma: tuple[float, ...], z: np.ndarray) -> np.ndarray:
    # P(B) X = Q(B) Z with zero presample values; the burn-in absorbs the transient
    return signal.lfilter(ma_polynomial(ma), ar_polynomial(ar), z)


def _garch_path(omega0: float, alpha: float, beta: float, z: np.ndarray) -> np.ndarray:
    denom = 1.0 - alpha - beta
    var = omega0 / denom if denom > 0.0 else omega0
    out = np.empty_like(z)
    zs = z.tolist()
    x_prev = 0.0
    for t, zt in enumerate(zs):
        if t > 0:
            var = omega0 + alpha * x_prev * x_prev + beta * var
        x_prev = math.sqrt(var) * zt
        out[t] = x_prev
    return out


def _egarch_path(omega0: float, alpha: float, gamma: float, beta: float, z: np.ndarray) -> np.ndarray:
    log_var = omega0 / (1.0 - beta)
    out = np.empty_like(z)
    zs = z.tolist()
    z_prev = 0.0
    for t, zt in enumerate(zs):
        if t > 0:
            log_var = omega0 + alpha * (abs(z_prev) - _ABS_Z_MEAN) + gamma * z_prev + beta * log_var
        out[t] = math.exp(0.5 * log_var) * zt
        z_prev = zt
    return out


def simulate_values(spec: ModelSpec, config: SimConfig) -> np.ndarray:
    """Raw simulated values (after burn-in) without the TimeSeries wrapper."""
    verdict = check_admissible(spec)
    if not verdict:
        raise PreconditionError(f"cannot simulate {format_model_spec(spec)}: {verdict.message}")

    rng = derive_stream(config.seed, config.replicate_index)
    z = rng.standard_normal(config.burn_in + config.n)

    if isinstance(spec, ARSpec):
        path = _linear_path(spec.coeffs, (), z)
    elif isinstance(spec, ARMASpec):
        path = _linear_path(spec.ar, spec.ma, z)
    elif isinstance(spec, (ARCH1Spec, GARCH11Spec)):
        path = _garch_path(spec.omega0, spec.alpha, spec.beta, z)
    elif isinstance(spec, EGARCH11Spec):
        path = _egarch_path(spec.omega0, spec.alpha, spec.gamma, spec.beta, z)
    else:  # pragma: no cover - the union is closed
        raise PreconditionError(f"unknown model kind {spec!r}")
    return path[config.burn_in:]


def simulate(spec: ModelSpec, config: SimConfig) -> TimeSeries:
    """Simulate one path of *spec*; a pure function of (spec, config).

    Usage::

        ts = simulate(parse_model_spec("ar(0.5)"), SimConfig(n=512, seed=7))
    """
    values = simulate_values(spec, config)
    label = f"{format_model_spec(spec)} seed={config.seed} r={config.replicate_index}"
    return TimeSeries(values, label=label)
