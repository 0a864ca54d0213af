"""Gaussian quasi-maximum-likelihood fits for ARCH(1), GARCH(1,1) and EGARCH(1,1).

The optimizer works in an unconstrained parameterization that maps onto the
admissible set:

    ARCH1 / GARCH11:  omega0 = exp(u0)
                      (alpha, beta) = (e^u1, e^u2) / (1 + e^u1 + e^u2) * (1 - 1e-8)
    EGARCH11:         beta = tanh(u3) * (1 - 1e-8); omega0, alpha, gamma free
"""

from __future__ import annotations

import logging
import math

import numpy as np
from joblib import Parallel, delayed
from scipy import signal

from ..errors import FitError, InvalidInputError
from ..models.spec import ARCH1Spec, EGARCH11Spec, GARCH11Spec
from ..spectra.schema import TimeSeries
from .nelder_mead import NelderMeadResult, nelder_mead
from .result import FitResult

logger = logging.getLogger(__name__)

GARCH_VARIANTS = ("arch1", "garch11", "egarch11")
MIN_GARCH_LENGTH = 200

_SCALE = 1.0 - 1e-8
_ABS_Z_MEAN = math.sqrt(2.0 / math.pi)
_LOG_VAR_CAP = 700.0  # exp overflow guard
_OMEGA_FLOOR = float(np.finfo(np.float64).tiny)


# ---------------------------------------------------------------------------
# Reparameterization
# ---------------------------------------------------------------------------

def to_unconstrained(spec: ARCH1Spec | GARCH11Spec | EGARCH11Spec) -> np.ndarray:
    """Inverse of from_unconstrained; requires alpha > 0 (and beta > 0 for GARCH11)."""
    if isinstance(spec, EGARCH11Spec):
        return np.array([spec.omega0, spec.alpha, spec.gamma, math.atanh(spec.beta / _SCALE)])
    a = spec.alpha / _SCALE
    if isinstance(spec, ARCH1Spec):
        return np.array([math.log(spec.omega0), math.log(a / (1.0 - a))])
    b = spec.beta / _SCALE
    rest = 1.0 - a - b
    return np.array([math.log(spec.omega0), math.log(a / rest), math.log(b / rest)])


def from_unconstrained(variant: str, u: np.ndarray) -> ARCH1Spec | GARCH11Spec | EGARCH11Spec:
    if variant == "egarch11":
        return EGARCH11Spec(
            omega0=float(u[0]), alpha=float(u[1]), gamma=float(u[2]), beta=math.tanh(u[3]) * _SCALE
        )
    # exp underflows to 0 for very negative u0; keep omega0 strictly positive
    omega0 = max(math.exp(u[0]), _OMEGA_FLOOR)
    if variant == "arch1":
        # logistic written to stay finite for large |u1|
        alpha = _SCALE / (1.0 + math.exp(-u[1])) if u[1] > -700 else 0.0
        return ARCH1Spec(omega0=omega0, alpha=alpha)
    m = max(0.0, u[1], u[2])
    e0, e1, e2 = math.exp(-m), math.exp(u[1] - m), math.exp(u[2] - m)
    total = e0 + e1 + e2
    return GARCH11Spec(omega0=omega0, alpha=e1 / total * _SCALE, beta=e2 / total * _SCALE)


# ---------------------------------------------------------------------------
# Likelihood
# ---------------------------------------------------------------------------

def conditional_variances(x: np.ndarray, spec: ARCH1Spec | GARCH11Spec | EGARCH11Spec) -> np.ndarray:
    """sigma_t^2 for t = 0..n-1, started at the sample variance of x."""
    start = float(np.var(x))
    if isinstance(spec, EGARCH11Spec):
        log_var = math.log(start)
        out = np.empty_like(x)
        for t, xt in enumerate(x.tolist()):
            if t > 0:
                z_prev = x_prev / math.sqrt(out[t - 1])
                log_var = (
                    spec.omega0
                    + spec.alpha * (abs(z_prev) - _ABS_Z_MEAN)
                    + spec.gamma * z_prev
                    + spec.beta * log_var
                )
                if abs(log_var) > _LOG_VAR_CAP:
                    out[t:] = math.inf if log_var > 0 else 0.0
                    return out
            out[t] = math.exp(log_var)
            x_prev = xt
        return out
    # sigma_t^2 - beta sigma_{t-1}^2 = omega0 + alpha x_{t-1}^2 is a first-order linear filter
    drive = np.empty_like(x)
    drive[0] = start
    drive[1:] = spec.omega0 + spec.alpha * x[:-1] * x[:-1]
    return signal.lfilter([1.0], [1.0, -spec.beta], drive)


def qmle_objective(x: np.ndarray, spec: ARCH1Spec | GARCH11Spec | EGARCH11Spec) -> float:
    """(1/2) sum_t [ln sigma_t^2 + x_t^2 / sigma_t^2]; +inf when the recursion degenerates."""
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        var = conditional_variances(x, spec)
        if not np.all(np.isfinite(var)) or np.any(var <= 0.0):
            return math.inf
        value = 0.5 * float(np.sum(np.log(var) + x * x / var))
    return value if math.isfinite(value) else math.inf


# ---------------------------------------------------------------------------
# Fitting
# ---------------------------------------------------------------------------

def _starting_points(variant: str, x: np.ndarray) -> list[np.ndarray]:
    """Heuristic moment-based start plus two fixed perturbations."""
    s = float(np.var(x))
    if variant == "arch1":
        points = [ARCH1Spec(omega0=s * (1 - a), alpha=a) for a in (0.2, 0.05, 0.5)]
    elif variant == "garch11":
        points = [
            GARCH11Spec(omega0=s * (1 - a - b), alpha=a, beta=b)
            for a, b in ((0.1, 0.8), (0.05, 0.9), (0.2, 0.6))
        ]
    else:
        points = [
            EGARCH11Spec(omega0=math.log(s) * (1 - b), alpha=a, gamma=g, beta=b)
            for a, g, b in ((0.1, 0.0, 0.9), (0.2, -0.1, 0.8), (0.05, 0.1, 0.95))
        ]
    return [to_unconstrained(p) for p in points]


def _run_start(variant: str, x: np.ndarray, u0: np.ndarray, tol: float, max_iter: int) -> NelderMeadResult | None:
    def objective(u: np.ndarray) -> float:
        try:
            return qmle_objective(x, from_unconstrained(variant, u))
        except (OverflowError, ValueError):
            return math.inf

    try:
        return nelder_mead(objective, u0, tol=tol, max_iter=max_iter)
    except InvalidInputError:
        return None


def fit_garch(
    series: TimeSeries,
    variant: str,
    *,
    tol: float = 1e-8,
    max_iter: int = 2000,
    n_jobs: int = 1,
) -> FitResult:
    """Gaussian QMLE for a GARCH-family *variant* using three Nelder-Mead starts.

    Usage::

        result = fit_garch(ts, "garch11")
        result.spec.alpha, result.spec.beta
    """
    variant = variant.lower()
    if variant not in GARCH_VARIANTS:
        raise InvalidInputError(f"unknown GARCH variant {variant!r}; expected one of {GARCH_VARIANTS}")
    if series.n < MIN_GARCH_LENGTH:
        raise InvalidInputError(f"GARCH fits need n >= {MIN_GARCH_LENGTH}, got n = {series.n}")
    x = series.values
    if np.ptp(x) == 0.0:
        raise FitError("cannot fit a volatility model to a constant series", diagnostics={"n": series.n})

    starts = _starting_points(variant, x)
    results = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_run_start)(variant, x, u0, tol, max_iter) for u0 in starts
    )

    best_index, best = None, None
    for i, res in enumerate(results):
        logger.debug("%s start %d: %s", variant, i, "diverged" if res is None else f"f={res.fun:.10g}")
        if res is None or not math.isfinite(res.fun):
            continue
        if best is None or res.fun < best.fun:
            best_index, best = i, res
    if best is None:
        raise FitError(
            f"all {len(starts)} {variant} QMLE starts diverged",
            diagnostics={"starts": [s.tolist() for s in starts], "n": series.n},
        )

    spec = from_unconstrained(variant, best.x)
    if not best.converged:
        logger.warning("%s QMLE did not converge within %d iterations (start %d)", variant, max_iter, best_index)
    logger.info("Fitted %s (objective=%.6g, start %d)", spec, best.fun, best_index)
    return FitResult(spec, best.fun, converged=best.converged, iterations=best.iterations, method="qmle")
