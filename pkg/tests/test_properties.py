"""Property-based checks (hypothesis) of the estimator, p-values, regions and persistence."""

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal

from conftest import hermitian_field, make_ensemble
from copspec.diagnostics import (
    EstimatorConfig,
    bootstrap_pvalue,
    bootstrap_replicates,
    regions_from_replicates,
    uniform_pvalues,
)
from copspec.io import load_ensemble, persist_ensemble
from copspec.models import ARSpec, GARCH11Spec
from copspec.spectra import FrequencyGrid, KernelSpec, QuantileGrid, SpectralMatrix, TimeSeries, smoothed_estimate

TAUS = QuantileGrid(np.array([0.1, 0.5, 0.9]))
OMEGAS = FrequencyGrid(np.array([0.0, math.pi / 4, math.pi / 2, math.pi]))
CONFIG = EstimatorConfig(taus=(0.1, 0.5, 0.9), omegas=(0.0, math.pi / 4, math.pi / 2, math.pi))

# integer-valued samples: the monotone maps below are exact on them, ties included
integer_series = st.integers(min_value=16, max_value=64).flatmap(
    lambda n: arrays(np.float64, n, elements=st.integers(-1000, 1000).map(float))
)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=200, deadline=None)
@given(x=integer_series, bandwidth=st.floats(0.3, 1.0))
def test_estimate_depends_only_on_ranks(x, bandwidth):
    kernel = KernelSpec(bandwidth=bandwidth)
    base = smoothed_estimate(TimeSeries(x), TAUS, OMEGAS, kernel)
    moved = smoothed_estimate(TimeSeries(2.0 * x**3 + x + 7.0), TAUS, OMEGAS, kernel)
    assert_array_equal(base.values, moved.values)


@settings(max_examples=200, deadline=None)
@given(x=integer_series)
def test_estimate_is_hermitian(x):
    values = smoothed_estimate(TimeSeries(x), TAUS, OMEGAS, KernelSpec(bandwidth=0.5)).values
    assert_array_equal(values, np.conj(np.transpose(values, (1, 0, 2))))
    assert_array_equal(np.diagonal(values).imag, 0.0)


@settings(max_examples=200, deadline=None)
@given(
    x=st.integers(min_value=16, max_value=96).flatmap(
        lambda n: arrays(np.float64, n, elements=st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False))
    ),
    bandwidth=st.floats(0.05, math.pi),
)
def test_estimate_is_positive_semidefinite(x, bandwidth):
    kernel = KernelSpec(bandwidth=bandwidth)
    values = smoothed_estimate(TimeSeries(x), QuantileGrid.equispaced(9), OMEGAS, kernel).values
    for k in range(values.shape[-1]):
        assert np.linalg.eigvalsh(values[..., k]).min() >= -1e-9


@settings(max_examples=200, deadline=None)
@given(seed=seeds, R=st.integers(2, 30))
def test_pvalues_ignore_replicate_order(seed, R):
    rng = np.random.default_rng(seed)
    reps = np.stack([hermitian_field(rng, 3, 4) for _ in range(R)])
    estimate = SpectralMatrix(TAUS, OMEGAS, hermitian_field(rng, 3, 4, scale=2.0))
    forward = uniform_pvalues(make_ensemble(CONFIG, reps), estimate)
    shuffled = uniform_pvalues(make_ensemble(CONFIG, reps[rng.permutation(R)]), estimate)
    assert_array_equal(forward.p_re, shuffled.p_re)
    assert_array_equal(forward.p_im, shuffled.p_im)
    assert_array_equal(forward.p_min, shuffled.p_min)


@settings(max_examples=200, deadline=None)
@given(
    stats=st.lists(st.floats(0.0, 50.0), min_size=1, max_size=40),
    e1=st.floats(0.0, 60.0),
    e2=st.floats(0.0, 60.0),
)
def test_pvalue_is_a_multiple_of_one_over_R_and_monotone(stats, e1, e2):
    R = len(stats)
    lo, hi = sorted((e1, e2))
    p_lo, p_hi = bootstrap_pvalue(np.array(stats), np.array([lo, hi]))
    assert p_hi <= p_lo
    for p in (p_lo, p_hi):
        assert 0.0 <= p <= 1.0
        assert math.isclose(p * R, round(p * R), abs_tol=1e-9)


@settings(max_examples=200, deadline=None)
@given(seed=seeds, shift=st.complex_numbers(max_magnitude=10.0), alpha=st.floats(0.01, 0.5))
def test_regions_shift_with_the_replicates(seed, shift, alpha):
    rng = np.random.default_rng(seed)
    reps = rng.normal(size=(25, 3, 3, 4)) + 1j * rng.normal(size=(25, 3, 3, 4))
    base = regions_from_replicates(reps, TAUS, OMEGAS, alpha)
    moved = regions_from_replicates(reps + shift, TAUS, OMEGAS, alpha)
    assert_allclose(moved.lower_re, base.lower_re + shift.real, atol=1e-9)
    assert_allclose(moved.upper_re, base.upper_re + shift.real, atol=1e-9)
    assert_allclose(moved.lower_im, base.lower_im + shift.imag, atol=1e-9)
    assert_allclose(moved.upper_im, base.upper_im + shift.imag, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(seed=seeds, R=st.integers(2, 6))
def test_persisted_ensemble_is_bit_exact(tmp_path_factory, seed, R):
    rng = np.random.default_rng(seed)
    ens = make_ensemble(CONFIG, np.stack([hermitian_field(rng, 3, 4, scale=1e-3) for _ in range(R)]), seed=seed)
    path = persist_ensemble(ens, tmp_path_factory.mktemp("ens") / "ens.bin")
    back = load_ensemble(path)
    assert_array_equal(back.replicates, ens.replicates)
    assert back.seed == seed
    assert back.fitted.spec == ens.fitted.spec
    assert back.config == ens.config


@settings(max_examples=25, deadline=None)
@given(
    spec=st.sampled_from([ARSpec(coeffs=(0.4,)), GARCH11Spec(omega0=0.01, alpha=0.3, beta=0.5)]),
    seed=seeds,
    R=st.integers(2, 6),
    n_jobs=st.integers(2, 4),
)
def test_bootstrap_does_not_depend_on_worker_count(spec, seed, R, n_jobs):
    (serial,) = bootstrap_replicates(spec, 64, R, (CONFIG,), seed, n_jobs=1)
    (threaded,) = bootstrap_replicates(spec, 64, R, (CONFIG,), seed, n_jobs=n_jobs)
    assert_array_equal(serial, threaded)
