"""Reference spectra: bivariate normal CDF, Gaussian ARMA spectra, Monte-Carlo spectra, asymptotics."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal
from scipy import integrate

from copspec.errors import InvalidInputError, PreconditionError, UnsupportedModelError
from copspec.models import ARMASpec, ARSpec, GARCH11Spec, SimConfig, simulate
from copspec.reference import (
    LagCopulaTable,
    arma_autocorrelations,
    arma_psi_weights,
    asymptotic_covariance,
    asymptotic_part_variance,
    asymptotic_standard_error,
    bvn_cdf,
    empirical_lag_copulas,
    gaussian_copula_spectrum,
    gaussian_lag_copulas,
    mc_copula_spectrum,
    spectrum_from_lag_copulas,
    truncation_lag,
)
from copspec.spectra import FrequencyGrid, KernelSpec, QuantileGrid, SpectralMatrix


def _independence_spectrum(taus: QuantileGrid, omegas: FrequencyGrid) -> SpectralMatrix:
    levels = taus.levels
    flat = (np.minimum.outer(levels, levels) - np.outer(levels, levels)) / (2 * math.pi)
    return SpectralMatrix(taus, omegas, np.repeat(flat[:, :, None], len(omegas), axis=2))


# ---------------------------------------------------------------------------
# Bivariate normal CDF
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("rho", [-0.99, -0.5, 0.0, 0.3, 0.8, 0.999])
def test_bvn_at_origin_has_closed_form(rho):
    assert bvn_cdf(0.0, 0.0, rho) == pytest.approx(0.25 + math.asin(rho) / (2 * math.pi), abs=1e-12)


def test_bvn_degenerate_correlations_and_infinite_limits():
    assert bvn_cdf(0.3, -0.2, 1.0) == pytest.approx(0.4207402905608969)   # Phi(-0.2)
    assert bvn_cdf(1.0, 1.0, -1.0) == pytest.approx(2 * 0.8413447460685429 - 1)
    assert bvn_cdf(-math.inf, 0.0, 0.5) == 0.0
    assert bvn_cdf(math.inf, 0.0, 0.5) == pytest.approx(0.5)
    assert bvn_cdf(0.0, 0.0, 0.0) == 0.25


def test_bvn_is_symmetric_in_its_arguments():
    assert bvn_cdf(0.4, -1.3, 0.7) == bvn_cdf(-1.3, 0.4, 0.7)


def test_bvn_is_monotone_in_each_argument():
    grid = np.linspace(-2.5, 2.5, 11)
    rhos = np.linspace(-0.95, 0.95, 9)
    for rho in (-0.7, 0.0, 0.6):
        table = np.array([[bvn_cdf(a, b, rho) for b in grid] for a in grid])
        assert np.all(np.diff(table, axis=0) >= -1e-12)
        assert np.all(np.diff(table, axis=1) >= -1e-12)
    for a, b in ((0.0, 0.0), (-1.0, 0.5), (1.5, 1.2)):
        along_rho = np.array([bvn_cdf(a, b, r) for r in rhos])
        assert np.all(np.diff(along_rho) >= -1e-12)


def test_bvn_rejects_bad_correlation():
    with pytest.raises(InvalidInputError):
        bvn_cdf(0.0, 0.0, 1.5)
    with pytest.raises(InvalidInputError):
        bvn_cdf(math.nan, 0.0, 0.5)


# ---------------------------------------------------------------------------
# ARMA correlations and truncation
# ---------------------------------------------------------------------------

def test_psi_weights_of_ar1():
    assert_allclose(arma_psi_weights(ARSpec(coeffs=(0.5,)), 4), [1.0, 0.5, 0.25, 0.125])


def test_arma_autocorrelations():
    assert_allclose(arma_autocorrelations(ARSpec(coeffs=(0.5,)), 3), [1.0, 0.5, 0.25, 0.125], atol=1e-12)
    assert_allclose(arma_autocorrelations(ARMASpec(ma=(0.5,)), 3), [1.0, 0.4, 0.0, 0.0], atol=1e-12)


def test_autocorrelations_reject_nonlinear_or_inadmissible_specs():
    with pytest.raises(UnsupportedModelError):
        arma_autocorrelations(GARCH11Spec(omega0=0.01, alpha=0.4, beta=0.5), 3)
    with pytest.raises(PreconditionError):
        arma_autocorrelations(ARSpec(coeffs=(1.0,)), 3)


def test_truncation_lag():
    assert truncation_lag(np.array([1.0, 0.5, 0.0, 0.0])) == 2
    assert truncation_lag(np.array([1.0, 0.0, 0.0])) == 0
    # never reaches the tolerance: last index
    assert truncation_lag(np.full(5, 0.5)) == 4


# ---------------------------------------------------------------------------
# Lag copula tables
# ---------------------------------------------------------------------------

def test_lag_copula_table_reflection_and_margins():
    taus = QuantileGrid(np.array([0.2, 0.6]))
    values = np.array([[[0.2, 0.2], [0.2, 0.6]], [[0.1, 0.15], [0.05, 0.4]]])
    table = LagCopulaTable(taus, values)
    assert table.max_lag == 1
    assert_array_equal(table.at(-1), table.at(1).T)
    levels, ext = table.with_margins(1)
    assert_allclose(levels, [0.0, 0.2, 0.6, 1.0])
    assert_array_equal(ext[0], 0.0)
    assert_allclose(ext[-1], levels)
    assert_allclose(ext[:, -1], levels)
    with pytest.raises(InvalidInputError):
        table.at(2)


def test_gaussian_lag_copulas_at_lag_zero_are_comonotone():
    taus = QuantileGrid.plot_default()
    table = gaussian_lag_copulas(ARSpec(coeffs=(0.5,)), taus, 3)
    assert_allclose(table.at(0), np.minimum.outer(taus.levels, taus.levels))
    assert table.at(1)[1, 1] == pytest.approx(0.25 + math.asin(0.5) / (2 * math.pi))


def test_empirical_lag_copulas_at_lag_zero():
    ts = simulate(ARSpec(coeffs=(0.3,)), SimConfig(n=100, seed=1))
    taus = QuantileGrid.plot_default()
    table = empirical_lag_copulas(ts, taus, 5)
    assert_allclose(table.at(0), np.minimum.outer(taus.levels, taus.levels))


# ---------------------------------------------------------------------------
# Gaussian spectra
# ---------------------------------------------------------------------------

def test_white_noise_spectrum_is_flat_and_real():
    taus = QuantileGrid.equispaced(9)
    omegas = FrequencyGrid.fourier(16)
    spec = gaussian_copula_spectrum(ARSpec(coeffs=()), taus, omegas)
    assert_allclose(spec.values, _independence_spectrum(taus, omegas).values, atol=1e-14)
    assert_array_equal(spec.values.imag, 0.0)


def test_gaussian_linear_spectra_are_real():
    # reversible processes: every lag copula is symmetric
    spec = gaussian_copula_spectrum(ARMASpec(ar=(0.1,), ma=(0.8,)), QuantileGrid.plot_default(), FrequencyGrid.fourier(16))
    assert np.max(np.abs(spec.values.imag)) < 1e-14


def test_gaussian_spectrum_integrates_to_lag_zero_deviation():
    # the mean over a fine frequency grid on [0, pi] recovers (C_0 - tau tau) / (2 pi)
    taus = QuantileGrid.plot_default()
    spec = gaussian_copula_spectrum(ARSpec(coeffs=(0.5,)), taus, FrequencyGrid(np.linspace(0, math.pi, 4097)))
    mean = integrate.trapezoid(spec.values.real, dx=math.pi / 4096, axis=-1) / math.pi
    expected = _independence_spectrum(taus, FrequencyGrid(np.array([0.0]))).values[..., 0]
    assert_allclose(mean, expected, atol=1e-6)


def test_spectrum_from_table_of_independent_copulas():
    taus = QuantileGrid.plot_default()
    levels = taus.levels
    values = np.stack([np.minimum.outer(levels, levels)] + [np.outer(levels, levels)] * 3)
    spec = spectrum_from_lag_copulas(LagCopulaTable(taus, values), FrequencyGrid.fourier(8))
    assert_allclose(spec.values, _independence_spectrum(taus, FrequencyGrid.fourier(8)).values)


# ---------------------------------------------------------------------------
# Monte-Carlo spectra
# ---------------------------------------------------------------------------

def test_mc_spectrum_agrees_with_gaussian_reference():
    spec = ARSpec(coeffs=(0.5,))
    taus = QuantileGrid.plot_default()
    omegas = FrequencyGrid.fourier(16)
    exact = gaussian_copula_spectrum(spec, taus, omegas)
    mc = mc_copula_spectrum(spec, taus, omegas, max_lag=30, sim_length=200_000, seed=3, n_jobs=2)
    assert mc.std_error is not None
    tol = 5 * mc.std_error.real + 2e-3
    assert np.all(np.abs(mc.values.real - exact.values.real) <= tol)


def test_mc_spectrum_is_reproducible():
    spec = GARCH11Spec(omega0=0.01, alpha=0.4, beta=0.5)
    args = (spec, QuantileGrid.plot_default(), FrequencyGrid.fourier(8))
    a = mc_copula_spectrum(*args, max_lag=5, sim_length=4000, seed=1)
    b = mc_copula_spectrum(*args, max_lag=5, sim_length=4000, seed=1, n_jobs=3)
    assert_array_equal(a.values, b.values)


def test_mc_standard_error_halves_when_the_path_is_four_times_longer():
    args = (GARCH11Spec(omega0=0.01, alpha=0.1, beta=0.8), QuantileGrid.plot_default(), FrequencyGrid.fourier(8))
    short = mc_copula_spectrum(*args, max_lag=10, sim_length=40_000, seed=4)
    long = mc_copula_spectrum(*args, max_lag=10, sim_length=160_000, seed=4)
    ratio = np.median(short.std_error.real / long.std_error.real)
    assert 2.0 / 1.5 <= ratio <= 2.0 * 1.5


def test_mc_spectrum_preconditions():
    args = (ARSpec(coeffs=(0.5,)), QuantileGrid.plot_default(), FrequencyGrid.fourier(8))
    with pytest.raises(PreconditionError):
        mc_copula_spectrum(*args, max_lag=50, sim_length=1000)
    with pytest.raises(PreconditionError):
        mc_copula_spectrum(ARSpec(coeffs=(1.0,)), *args[1:], max_lag=5, sim_length=4000)
    with pytest.raises(InvalidInputError):
        mc_copula_spectrum(*args, max_lag=5, sim_length=4000, n_segments=1)


# ---------------------------------------------------------------------------
# Asymptotics
# ---------------------------------------------------------------------------

def test_asymptotic_variance_for_white_noise():
    taus = QuantileGrid.plot_default()
    omegas = FrequencyGrid(np.array([0.0, math.pi / 2]))
    f_true = _independence_spectrum(taus, omegas)
    kernel = KernelSpec(bandwidth=0.1)
    f = 0.25 / (2 * math.pi)
    pair = (0.5, 0.5)
    assert asymptotic_part_variance(f_true, kernel, math.pi / 2, pair, "re") == pytest.approx(1.2 * f * f)
    assert asymptotic_part_variance(f_true, kernel, math.pi / 2, pair, "im") == pytest.approx(0.0, abs=1e-15)
    assert asymptotic_part_variance(f_true, kernel, 0.0, pair, "re") == pytest.approx(2.4 * f * f)
    se = asymptotic_standard_error(f_true, kernel, 512, math.pi / 2, pair)
    assert se == pytest.approx(math.sqrt(1.2 * f * f / (512 * 0.1)))


def test_asymptotic_covariance_is_hermitian():
    taus = QuantileGrid.plot_default()
    omegas = FrequencyGrid(np.array([1.0]))
    f_true = gaussian_copula_spectrum(ARSpec(coeffs=(0.5,)), taus, omegas)
    cov = asymptotic_covariance(f_true, KernelSpec(), 1.0, [(0.1, 0.5), (0.5, 0.9), (0.9, 0.9)])
    assert_allclose(cov.matrix, np.conj(cov.matrix.T))
    assert cov.variance((0.9, 0.9)) > 0.0


def test_asymptotic_inputs_are_checked():
    taus = QuantileGrid.plot_default()
    f_true = _independence_spectrum(taus, FrequencyGrid(np.array([1.0])))
    with pytest.raises(InvalidInputError):
        asymptotic_covariance(f_true, KernelSpec(), 1.0, [])
    with pytest.raises(InvalidInputError):
        asymptotic_part_variance(f_true, KernelSpec(), 1.0, (0.5, 0.5), "abs")
    with pytest.raises(InvalidInputError):
        asymptotic_covariance(f_true, KernelSpec(), 2.0, [(0.5, 0.5)])
