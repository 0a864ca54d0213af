"""Asymptotic covariance of the normalized estimator sqrt(n b_n) (f_hat - f)."""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from ..errors import InvalidInputError
from ..spectra.kernel import kernel_l2_norm
from ..spectra.schema import KernelSpec, SpectralMatrix
from .schema import AsymptoticCov

_MOD_PI_TOL = 1e-12


def _is_zero_mod_pi(omega: float) -> bool:
    r = omega / math.pi
    return abs(r - round(r)) < _MOD_PI_TOL


def asymptotic_covariance(
    f_true: SpectralMatrix,
    kernel: KernelSpec,
    omega: float,
    pairs: Sequence[tuple[float, float]],
) -> AsymptoticCov:
    """Covariance of the limit process between tau pairs at frequency *omega*:

        2 pi * int W^2 * [ f_{(u1,u2)}(w) f_{(v1,v2)}(-w)
                           + f_{(u1,v2)}(w) f_{(v1,u2)}(-w) * 1{w = 0 mod pi} ]

    for pairs a = (u1, v1) and b = (u2, v2); f(-w) = conj(f(w)).
    """
    if not pairs:
        raise InvalidInputError("asymptotic_covariance needs at least one tau pair")
    k = f_true.freq_grid.index_of(omega)
    grid = f_true.tau_grid

    def f(t1: float, t2: float) -> complex:
        return complex(f_true.values[grid.index_of(t1), grid.index_of(t2), k])

    const = 2.0 * math.pi * kernel_l2_norm(kernel)
    fold = _is_zero_mod_pi(omega)
    pairs = tuple((float(u), float(v)) for u, v in pairs)
    cov = np.empty((len(pairs), len(pairs)), dtype=np.complex128)
    for i, (u1, v1) in enumerate(pairs):
        for j, (u2, v2) in enumerate(pairs):
            term = f(u1, u2) * f(v1, v2).conjugate()
            if fold:
                term += f(u1, v2) * f(v1, u2).conjugate()
            cov[i, j] = const * term
    return AsymptoticCov(pairs=pairs, omega=float(omega), matrix=cov)


def asymptotic_part_variance(
    f_true: SpectralMatrix,
    kernel: KernelSpec,
    omega: float,
    pair: tuple[float, float],
    part: str = "re",
) -> float:
    """Limit variance of Re (part="re") or Im (part="im") of the estimator at *pair*.

    Uses E[H(u,v)^2] = E[H(u,v) conj(H(v,u))] since conj(f_hat_{(u,v)}) = f_hat_{(v,u)}.
    """
    u, v = pair
    cov = asymptotic_covariance(f_true, kernel, omega, [(u, v), (v, u)]).matrix
    second = cov[0, 1].real
    if part == "re":
        return 0.5 * (cov[0, 0].real + second)
    if part == "im":
        return 0.5 * (cov[0, 0].real - second)
    raise InvalidInputError(f"part must be 're' or 'im', got {part!r}")


def asymptotic_standard_error(
    f_true: SpectralMatrix,
    kernel: KernelSpec,
    n: int,
    omega: float,
    pair: tuple[float, float],
    part: str = "re",
) -> float:
    """sqrt(variance / (n b_n)) for the real or imaginary part of f_hat at *pair*."""
    return math.sqrt(asymptotic_part_variance(f_true, kernel, omega, pair, part) / (n * kernel.bandwidth))
