"""Linear model fits: Yule-Walker AR and Hannan-Rissanen + CSS ARMA."""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import linalg, signal

from ..errors import FitError, InvalidInputError
from ..models.spec import (
    ARMASpec,
    ARSpec,
    ar_polynomial,
    check_admissible,
    companion_spectral_radius,
    ma_polynomial,
)
from ..spectra.schema import TimeSeries
from .nelder_mead import nelder_mead
from .result import FitResult

logger = logging.getLogger(__name__)

# Violating AR roots are moved radially to modulus 1/(1 - _ROOT_MARGIN)
_ROOT_MARGIN = 1e-6
_RADIUS_LIMIT = 1.0 - 1e-10


def sample_autocovariances(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Biased autocovariances gamma_0..gamma_max_lag (denominator n)."""
    centered = x - x.mean()
    n = centered.size
    return np.array([np.dot(centered[h:], centered[: n - h]) / n for h in range(max_lag + 1)])


def project_stationary(ar: np.ndarray | tuple[float, ...]) -> tuple[float, ...]:
    """Pull AR roots on or inside the unit circle out to modulus 1/(1 - 1e-6)."""
    a = np.asarray(ar, dtype=np.float64)
    if a.size == 0 or companion_spectral_radius(a) < _RADIUS_LIMIT:
        return tuple(float(v) for v in a)
    p = a.size
    companion = np.zeros((p, p))
    companion[0, :] = a
    companion[1:, :-1] = np.eye(p - 1)
    # eigenvalues are reciprocal roots of P(z)
    inv_roots = np.linalg.eigvals(companion)
    mod = np.abs(inv_roots)
    bad = mod >= _RADIUS_LIMIT
    inv_roots[bad] = inv_roots[bad] / mod[bad] * (1.0 - _ROOT_MARGIN)
    projected = -np.real(np.poly(inv_roots))[1:]
    logger.warning(
        "projected %d polynomial root(s) off the unit disc: %s -> %s",
        int(bad.sum()), np.round(a, 6).tolist(), np.round(projected, 6).tolist(),
    )
    return tuple(float(v) for v in projected)


def _check_series(series: TimeSeries, order: int) -> np.ndarray:
    if series.n <= 10 * order:
        raise InvalidInputError(f"need n > 10 * {order} observations, got n = {series.n}")
    x = series.values
    if np.ptp(x) == 0.0:
        raise FitError("cannot fit a linear model to a constant series", diagnostics={"n": series.n})
    return x


def _yule_walker(x: np.ndarray, p: int) -> tuple[np.ndarray, float]:
    gamma = sample_autocovariances(x, p)
    if p == 0:
        return np.empty(0), float(gamma[0])
    # Levinson-Durbin recursion on the Toeplitz system
    coeffs = linalg.solve_toeplitz(gamma[:p], gamma[1 : p + 1])
    sigma2 = float(gamma[0] - np.dot(coeffs, gamma[1 : p + 1]))
    return coeffs, sigma2


def fit_ar(series: TimeSeries, p: int) -> FitResult:
    """Yule-Walker AR(p) fit; objective_value is the innovation variance estimate."""
    if p < 0:
        raise InvalidInputError(f"AR order must be >= 0, got {p}")
    x = _check_series(series, p)
    coeffs, sigma2 = _yule_walker(x, p)
    spec = ARSpec(coeffs=project_stationary(coeffs))
    logger.debug("Yule-Walker AR(%d): %s sigma2=%.6g", p, spec, sigma2)
    return FitResult(spec, sigma2, converged=True, iterations=0, method="yule-walker")


# ---------------------------------------------------------------------------
# ARMA
# ---------------------------------------------------------------------------

def css_residuals(x: np.ndarray, ar: np.ndarray, ma: np.ndarray) -> np.ndarray:
    """Residuals of P(B) x = Q(B) e with zero presample values."""
    return signal.lfilter(ar_polynomial(tuple(ar)), ma_polynomial(tuple(ma)), x)


def css_objective(x: np.ndarray, ar: np.ndarray, ma: np.ndarray) -> float:
    """Conditional sum of squares divided by n; +inf outside the stationary/invertible region."""
    if companion_spectral_radius(ar) >= 1.0 or companion_spectral_radius(-np.asarray(ma)) >= 1.0:
        return math.inf
    with np.errstate(over="ignore", invalid="ignore"):
        e = css_residuals(x, ar, ma)
        value = float(np.dot(e, e) / x.size)
    return value if math.isfinite(value) else math.inf


def _hannan_rissanen(x: np.ndarray, p: int, q: int) -> tuple[np.ndarray, np.ndarray, float]:
    n = x.size
    long_order = max(1, min(math.ceil(math.log(n) ** 2), n // 10))
    phi, _ = _yule_walker(x, long_order)
    # long-AR residuals stand in for the unobserved innovations
    resid = signal.lfilter(np.concatenate([[1.0], -phi]), [1.0], x)
    start = long_order + max(p, q)
    rows = np.arange(start, n)
    columns = [x[rows - i] for i in range(1, p + 1)] + [resid[rows - j] for j in range(1, q + 1)]
    design = np.column_stack(columns)
    beta, *_ = np.linalg.lstsq(design, x[rows], rcond=None)
    fitted_resid = x[rows] - design @ beta
    return beta[:p], beta[p:], float(np.dot(fitted_resid, fitted_resid) / rows.size)


def fit_arma(series: TimeSeries, p: int, q: int, refine: bool = True) -> FitResult:
    """ARMA(p, q) fit: Hannan-Rissanen start, optionally refined by CSS via Nelder-Mead.

    With q = 0 the first stage is the Yule-Walker AR(p) solution.
    """
    if p < 0 or q < 0:
        raise InvalidInputError(f"ARMA orders must be >= 0, got p={p}, q={q}")
    x = _check_series(series, p + q)
    centered = x - x.mean()

    if q == 0:
        ar, _ = _yule_walker(x, p)
        ma = np.empty(0)
        method = "yule-walker"
    else:
        ar, ma, _ = _hannan_rissanen(centered, p, q)
        method = "hannan-rissanen"
    ar = np.asarray(project_stationary(ar))
    # keep the start strictly invertible so the CSS objective is finite there
    ma = -np.asarray(project_stationary(-ma)) if ma.size else ma

    iterations, converged = 0, True
    objective = css_objective(centered, ar, ma)
    if refine and p + q > 0:
        result = nelder_mead(
            lambda theta: css_objective(centered, theta[:p], theta[p:]),
            np.concatenate([ar, ma]),
        )
        ar, ma = result.x[:p], result.x[p:]
        objective, iterations, converged = result.fun, result.iterations, result.converged
        method += "+css"
        if not converged:
            logger.warning("ARMA(%d,%d) CSS did not converge after %d iterations", p, q, iterations)

    spec = ARMASpec(ar=project_stationary(ar), ma=tuple(float(b) for b in ma))
    verdict = check_admissible(spec)
    if not verdict:
        # near-cancelling AR/MA roots: shrink the MA part slightly
        spec = ARMASpec(ar=spec.ar, ma=tuple(b * (1.0 - _ROOT_MARGIN) for b in spec.ma))
        logger.warning("ARMA fit adjusted (%s)", verdict.message)
    logger.debug("ARMA(%d,%d) fit: %s objective=%.6g", p, q, spec, objective)
    return FitResult(spec, objective, converged=converged, iterations=iterations, method=method)
