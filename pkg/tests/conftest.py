"""Shared pytest configuration: --runslow, hypothesis profiles, small fixtures."""

import math
import os
import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

# Allow running from repo root without installing the package
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from copspec.diagnostics import BootstrapEnsemble, EstimatorConfig
from copspec.fitting import FitResult
from copspec.models import ARSpec, SimConfig, simulate

hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run Monte-Carlo acceptance tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch, tmp_path):
    """Keep COPSPEC_* variables and stray .env files out of every test."""
    for key in list(os.environ):
        if key.startswith("COPSPEC_"):
            monkeypatch.delenv(key, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def white_noise():
    return simulate(ARSpec(coeffs=(0.0,)), SimConfig(n=256, seed=11))


@pytest.fixture
def small_config():
    return EstimatorConfig(taus=(0.1, 0.5, 0.9), omegas=(0.0, math.pi / 4, math.pi / 2, math.pi))


def hermitian_field(rng: np.random.Generator, k: int, f: int, scale: float = 1.0) -> np.ndarray:
    """Random (k, k, f) complex array, Hermitian in the first two axes."""
    a = rng.normal(size=(k, k, f)) + 1j * rng.normal(size=(k, k, f))
    h = 0.5 * (a + np.conj(np.transpose(a, (1, 0, 2))))
    idx = np.arange(k)
    h[idx, idx, :] = h[idx, idx, :].real
    return scale * h


def make_ensemble(config: EstimatorConfig, replicates: np.ndarray, seed: int = 0) -> BootstrapEnsemble:
    fitted = FitResult(ARSpec(coeffs=(0.5,)), 1.0, converged=True, iterations=0, method="yule-walker")
    return BootstrapEnsemble(fitted, replicates, config, seed)
