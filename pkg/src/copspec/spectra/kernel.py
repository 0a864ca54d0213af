"""Periodized, bandwidth-scaled smoothing weights W_n."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import integrate

from .schema import KernelSpec

# For |u| <= pi and b <= pi only the translates j in -2..2 can be nonzero
_WRAP_SHIFTS = np.arange(-2, 3)


def periodized_kernel_weight(kernel: KernelSpec, u: np.ndarray | float) -> np.ndarray:
    """W_n(u) = sum_j b^-1 W((u + 2*pi*j) / b) over j in {-2..2}.

    Nonnegative, 2*pi-periodic and even in u.  The sum over all integers would be
    identical because the kernel has support [-pi, pi] and b <= pi.
    """
    u = np.asarray(u, dtype=np.float64)
    # reduce to [-pi, pi) so the five wrap terms cover the whole support
    u = np.mod(u + math.pi, 2.0 * math.pi) - math.pi
    b = kernel.bandwidth
    shifted = (u[..., None] + 2.0 * math.pi * _WRAP_SHIFTS) / b
    return kernel.density(shifted).sum(axis=-1) / b


@lru_cache(maxsize=16)
def kernel_l2_norm(kernel: KernelSpec) -> float:
    """Integral of W(u)^2 over [-pi, pi] (3/(5*pi) for the Epanechnikov kernel)."""
    value, _ = integrate.quad(lambda u: float(kernel.density(u)) ** 2, -math.pi, math.pi)
    return value
