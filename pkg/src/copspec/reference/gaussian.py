"""Analytic copula spectra of Gaussian ARMA processes.

For a Gaussian linear process the pair (X_{t+h}, X_t) is jointly normal with
correlation rho_h, so its copula is the Gaussian copula

    C_h(tau1, tau2) = Phi_2(Phi^-1(tau1), Phi^-1(tau2); rho_h)

and the copula spectrum is the truncated Fourier sum of C_h - tau1 tau2.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import signal, special

from ..errors import InvalidInputError, PreconditionError, UnsupportedModelError
from ..models.spec import (
    ARMASpec,
    ARSpec,
    ModelSpec,
    ar_polynomial,
    check_admissible,
    format_model_spec,
    ma_polynomial,
)
from ..spectra.schema import FrequencyGrid, QuantileGrid, SpectralMatrix
from .bvn import bvn_cdf
from .schema import LagCopulaTable

logger = logging.getLogger(__name__)

# Truncation targets: |rho_H| and (1/pi) * sum_{h > H} |rho_h|
_RHO_TOL = 1e-10
_TAIL_TOL = 1e-8
# psi-weights are grown until their tail drops below this fraction of the peak
_PSI_TAIL_TOL = 1e-17
_MAX_PSI_LENGTH = 1 << 20


def _linear_parts(spec: ModelSpec) -> tuple[tuple[float, ...], tuple[float, ...]]:
    if isinstance(spec, ARSpec):
        return spec.coeffs, ()
    if isinstance(spec, ARMASpec):
        return spec.ar, spec.ma
    raise UnsupportedModelError(
        f"{format_model_spec(spec)} is not a Gaussian linear model; use mc_copula_spectrum"
    )


def arma_psi_weights(spec: ModelSpec, length: int) -> np.ndarray:
    """First *length* coefficients of the power series Q(z) / P(z)."""
    ar, ma = _linear_parts(spec)
    impulse = np.zeros(length)
    impulse[0] = 1.0
    return signal.lfilter(ma_polynomial(ma), ar_polynomial(ar), impulse)


def _converged_psi(spec: ModelSpec, min_length: int) -> np.ndarray:
    length = max(64, min_length)
    while True:
        psi = arma_psi_weights(spec, length)
        tail = np.max(np.abs(psi[length // 2 :]))
        if tail <= _PSI_TAIL_TOL * np.max(np.abs(psi)) or length >= _MAX_PSI_LENGTH:
            return psi
        length *= 2


def arma_autocorrelations(spec: ModelSpec, max_lag: int) -> np.ndarray:
    """rho_0..rho_max_lag of an admissible AR/ARMA spec via its psi-weights."""
    if max_lag < 0:
        raise InvalidInputError(f"max_lag must be >= 0, got {max_lag}")
    verdict = check_admissible(spec)
    if not verdict:
        raise PreconditionError(f"{format_model_spec(spec)} is not admissible: {verdict.message}")
    psi = _converged_psi(spec, 2 * (max_lag + 1))
    acov = signal.correlate(psi, psi, mode="full", method="auto")[psi.size - 1 :]
    rho = acov / acov[0]
    rho[0] = 1.0
    out = np.zeros(max_lag + 1)
    m = min(rho.size, max_lag + 1)
    out[:m] = rho[:m]
    return out


def truncation_lag(rho: np.ndarray) -> int:
    """Smallest H with |rho_H| < 1e-10 and (1/pi) * sum_{h > H} |rho_h| < 1e-8."""
    abs_rho = np.abs(rho)
    # suffix[h] = sum_{k > h} |rho_k|
    suffix = np.concatenate([np.cumsum(abs_rho[::-1])[::-1][1:], [0.0]])
    ok = suffix / math.pi < _TAIL_TOL
    ok[1:] &= abs_rho[1:] < _RHO_TOL
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size else rho.size - 1


def gaussian_lag_copulas(spec: ModelSpec, taus: QuantileGrid, max_lag: int) -> LagCopulaTable:
    """Gaussian lag copulas C_0..C_max_lag of an AR/ARMA spec on *taus*."""
    rho = arma_autocorrelations(spec, max_lag)
    levels = taus.levels
    z = special.ndtri(levels)
    k = levels.size
    values = np.empty((max_lag + 1, k, k))
    values[0] = np.minimum.outer(levels, levels)
    for h in range(1, max_lag + 1):
        for i in range(k):
            for j in range(i + 1):
                values[h, i, j] = values[h, j, i] = bvn_cdf(z[i], z[j], float(rho[h]))
    return LagCopulaTable(taus, values)


def spectrum_from_lag_copulas(table: LagCopulaTable, omegas: FrequencyGrid) -> SpectralMatrix:
    """f(omega) = (1 / 2 pi) * sum_{|h| <= H} (C_h - tau1 tau2) exp(-i h omega).

    Evaluated as cosine and sine sums over h >= 1 so that reflection-symmetric
    tables give exactly zero imaginary parts.
    """
    levels = table.tau_grid.levels
    indep = np.outer(levels, levels)
    dev = table.values - indep[None, :, :]  # D_h for h >= 0
    d0 = dev[0]
    pos = dev[1:]
    neg = np.transpose(pos, (0, 2, 1))  # D_{-h} = D_h^T
    h = np.arange(1, table.max_lag + 1)
    phase = np.outer(h, omegas.omegas)
    even = np.einsum("hij,hk->ijk", pos + neg, np.cos(phase), optimize=False)
    odd = np.einsum("hij,hk->ijk", pos - neg, np.sin(phase), optimize=False)
    values = (d0[:, :, None] + even - 1j * odd) / (2.0 * math.pi)
    return SpectralMatrix(table.tau_grid, omegas, values)


def gaussian_copula_spectrum(
    spec: ModelSpec,
    taus: QuantileGrid,
    omegas: FrequencyGrid,
    max_lag: int | None = None,
) -> SpectralMatrix:
    """Exact (up to truncation) copula spectrum of a Gaussian AR/ARMA process.

    The truncation lag starts at *max_lag* (or 0) and grows until the tail bound
    (1/pi) * sum_{h > H} |rho_h| drops below 1e-8, which bounds the change from
    any further increase of H.

    Usage::

        f = gaussian_copula_spectrum(ARSpec(coeffs=(0.5,)), QuantileGrid.plot_default(),
                                     FrequencyGrid.fourier(64))
    """
    _linear_parts(spec)
    horizon = 64
    while True:
        rho = arma_autocorrelations(spec, horizon)
        lag = truncation_lag(rho)
        if lag < horizon or horizon >= _MAX_PSI_LENGTH:
            break
        horizon *= 4
    chosen = max(lag, max_lag or 0)
    logger.debug("gaussian spectrum of %s: truncation lag %d", format_model_spec(spec), chosen)
    return spectrum_from_lag_copulas(gaussian_lag_copulas(spec, taus, chosen), omegas)
