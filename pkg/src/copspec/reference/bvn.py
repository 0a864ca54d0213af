"""Bivariate standard normal CDF Phi_2(a, b; rho)."""

from __future__ import annotations

import math

from scipy import integrate, special

from ..errors import InvalidInputError

_TWO_PI = 2.0 * math.pi


def bvn_cdf(a: float, b: float, rho: float) -> float:
    """P(X <= a, Y <= b) for standard normals with correlation *rho*.

    Uses Phi(a) Phi(b) + integral_0^rho phi_2(a, b; r) dr, substituted r = sin(theta)
    so the integrand stays bounded as |rho| -> 1:

        (1 / 2 pi) * integral_0^arcsin(rho) exp(-(a^2 - 2ab sin t + b^2) / (2 cos^2 t)) dt

    Symmetric in (a, b) bit for bit.
    """
    if not math.isfinite(rho) or abs(rho) > 1.0:
        raise InvalidInputError(f"rho must lie in [-1, 1], got {rho}")
    if math.isnan(a) or math.isnan(b):
        raise InvalidInputError("bvn_cdf arguments must not be NaN")

    if a == -math.inf or b == -math.inf:
        return 0.0
    if a == math.inf:
        return float(special.ndtr(b))
    if b == math.inf:
        return float(special.ndtr(a))
    if rho == 1.0:
        return float(special.ndtr(min(a, b)))
    if rho == -1.0:
        return max(0.0, float(special.ndtr(a) + special.ndtr(b)) - 1.0)

    base = float(special.ndtr(a) * special.ndtr(b))
    if rho == 0.0:
        return base

    sq = a * a + b * b
    ab = a * b

    def integrand(theta: float) -> float:
        c = math.cos(theta)
        return math.exp(-(sq - 2.0 * ab * math.sin(theta)) / (2.0 * c * c))

    value, _ = integrate.quad(integrand, 0.0, math.asin(rho), epsabs=1e-13, epsrel=1e-12, limit=200)
    # clip rounding noise outside the Frechet bounds
    upper = float(special.ndtr(min(a, b)))
    lower = max(0.0, float(special.ndtr(a) + special.ndtr(b)) - 1.0)
    return min(upper, max(lower, base + value / _TWO_PI))
