"""reference: true copula spectra (analytic and Monte Carlo) and asymptotic covariances."""

from .asymptotics import asymptotic_covariance, asymptotic_part_variance, asymptotic_standard_error
from .bvn import bvn_cdf
from .gaussian import (
    arma_autocorrelations,
    arma_psi_weights,
    gaussian_copula_spectrum,
    gaussian_lag_copulas,
    spectrum_from_lag_copulas,
    truncation_lag,
)
from .montecarlo import DEFAULT_SEGMENTS, empirical_lag_copulas, lag_copulas_from_ranks, mc_copula_spectrum
from .schema import AsymptoticCov, LagCopulaTable

__all__ = [
    "AsymptoticCov",
    "DEFAULT_SEGMENTS",
    "LagCopulaTable",
    "arma_autocorrelations",
    "arma_psi_weights",
    "asymptotic_covariance",
    "asymptotic_part_variance",
    "asymptotic_standard_error",
    "bvn_cdf",
    "empirical_lag_copulas",
    "gaussian_copula_spectrum",
    "gaussian_lag_copulas",
    "lag_copulas_from_ranks",
    "mc_copula_spectrum",
    "spectrum_from_lag_copulas",
    "truncation_lag",
]
