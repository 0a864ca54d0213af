"""Data ingest, ensemble persistence, CSV export, plots and run configuration."""

import csv
import io
import math
import os
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from conftest import hermitian_field, make_ensemble
from copspec.diagnostics import EstimatorConfig, self_calibration_check, typical_regions, uniform_pvalues
from copspec.errors import ConfigError, DataError, EnsembleFormatError
from copspec.io import (
    FORMAT_VERSION,
    coverage_csv,
    emit_acf_plot,
    emit_coverage_plot,
    emit_detail_plot,
    emit_grid_plot,
    emit_rejection_plot,
    emit_summary_plot,
    estimate_csv,
    ingest_csv,
    ingest_values,
    load_ensemble,
    load_run_config,
    panel_pair,
    persist_ensemble,
    pmin_csv,
    pvalues_csv,
    read_config_file,
    read_estimate_csv,
    regions_csv,
    rejection_csv,
    series_csv,
    triangle_count,
    write_atomic,
    write_estimate_csv,
)
from copspec.models import ARSpec
from copspec.spectra import FrequencyGrid, KernelSpec, QuantileGrid, SpectralMatrix


def _rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def ensemble(small_config):
    rng = np.random.default_rng(0)
    reps = np.stack([hermitian_field(rng, 3, 4, scale=0.05) for _ in range(20)])
    return make_ensemble(small_config, reps, seed=17)


@pytest.fixture
def estimate(small_config):
    rng = np.random.default_rng(1)
    values = hermitian_field(rng, 3, 4, scale=0.05)
    return SpectralMatrix(small_config.tau_grid, small_config.freq_grid, values)


# ---------------------------------------------------------------------------
# Ingest
# ---------------------------------------------------------------------------

def test_ingest_with_header_and_blank_lines(tmp_path):
    path = tmp_path / "prices.csv"
    path.write_text("close\n1.0\n\n2.5\n-3\n4\n5\n6\n7\n8\n")
    values = ingest_values(path)
    assert_array_equal(values, [1.0, 2.5, -3.0, 4, 5, 6, 7, 8])
    ts = ingest_csv(path)
    assert ts.label == "prices"
    assert ts.n == 8


def test_ingest_reports_line_of_bad_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1.0\n2.0\nabc\n")
    with pytest.raises(DataError, match="line 3") as info:
        ingest_values(path)
    assert info.value.line == 3


def test_ingest_rejects_multiple_columns_and_nonfinite(tmp_path):
    path = tmp_path / "wide.csv"
    path.write_text("x\n1.0,2.0\n")
    with pytest.raises(DataError, match="line 2"):
        ingest_values(path)
    path.write_text("1.0\ninf\n")
    with pytest.raises(DataError, match="not finite"):
        ingest_values(path)


def test_ingest_log_returns(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("\n".join(str(v) for v in [1.0, math.e, 1.0, 2.0]))
    assert np.allclose(ingest_values(path, log_returns=True), [1.0, -1.0, math.log(2.0)])
    path.write_text("1.0\n0.0\n2.0\n")
    with pytest.raises(DataError, match="line 2"):
        ingest_values(path, log_returns=True)


def test_ingest_missing_or_short_file(tmp_path):
    with pytest.raises(DataError, match="not found"):
        ingest_csv(tmp_path / "nope.csv")
    short = tmp_path / "short.csv"
    short.write_text("1\n2\n3\n")
    with pytest.raises(DataError, match="at least"):
        ingest_csv(short)


def test_write_atomic_replaces_without_leftovers(tmp_path):
    target = tmp_path / "sub" / "out.txt"
    write_atomic(target, "one")
    write_atomic(target, b"two")
    assert target.read_text() == "two"
    assert [p.name for p in target.parent.iterdir()] == ["out.txt"]


# ---------------------------------------------------------------------------
# Ensemble persistence
# ---------------------------------------------------------------------------

def test_persist_round_trip_is_bit_exact(tmp_path, ensemble):
    path = persist_ensemble(ensemble, tmp_path / "ens.bin")
    loaded = load_ensemble(path)
    assert_array_equal(loaded.replicates, ensemble.replicates)
    assert loaded.seed == 17
    assert loaded.fitted.spec == ARSpec(coeffs=(0.5,))
    assert loaded.fitted.method == ensemble.fitted.method
    assert loaded.config == ensemble.config
    assert path.read_bytes().startswith(b"COPSPEC\x00")


def test_load_detects_truncated_payload(tmp_path, ensemble):
    path = persist_ensemble(ensemble, tmp_path / "ens.bin")
    blob = path.read_bytes()
    path.write_bytes(blob[:-16])
    with pytest.raises(EnsembleFormatError, match="payload size") as info:
        load_ensemble(path)
    assert info.value.found == info.value.expected - 16


def test_load_detects_truncated_header(tmp_path, ensemble):
    path = persist_ensemble(ensemble, tmp_path / "ens.bin")
    path.write_bytes(path.read_bytes()[:20])
    with pytest.raises(EnsembleFormatError, match="truncated header"):
        load_ensemble(path)


def test_load_rejects_other_format_versions(tmp_path, ensemble):
    path = persist_ensemble(ensemble, tmp_path / "ens.bin")
    blob = path.read_bytes()
    old = f'"version":{FORMAT_VERSION}'.encode()
    assert old in blob
    path.write_bytes(blob.replace(old, f'"version":{FORMAT_VERSION + 1}'.encode(), 1))
    with pytest.raises(EnsembleFormatError, match="incompatible"):
        load_ensemble(path)


def test_load_rejects_foreign_files(tmp_path):
    path = tmp_path / "other.bin"
    path.write_bytes(b"PK\x03\x04 not an ensemble")
    with pytest.raises(EnsembleFormatError, match="not a copspec ensemble"):
        load_ensemble(path)
    with pytest.raises(EnsembleFormatError, match="not found"):
        load_ensemble(tmp_path / "missing.bin")


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

def test_estimate_csv_round_trip(tmp_path, estimate):
    path = write_estimate_csv(estimate, tmp_path / "est.csv")
    back = read_estimate_csv(path)
    assert_array_equal(back.values, estimate.values)
    assert back.tau_grid == estimate.tau_grid
    assert back.freq_grid == estimate.freq_grid


def test_estimate_csv_layout(estimate):
    rows = _rows(estimate_csv(estimate))
    assert len(rows) == 3 * 3 * 4
    assert list(rows[0]) == ["tau1", "tau2", "omega", "re", "im"]
    assert (rows[0]["tau1"], rows[0]["tau2"], rows[0]["omega"]) == ("0.10000000000000001", "0.10000000000000001", "0")
    assert float(rows[1]["omega"]) == math.pi / 4


def test_read_estimate_csv_rejects_bad_files(tmp_path):
    path = tmp_path / "est.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(DataError, match="expected columns"):
        read_estimate_csv(path)
    path.write_text("tau1,tau2,omega,re,im\n0.5,0.5,0,x,0\n")
    with pytest.raises(DataError):
        read_estimate_csv(path)
    path.write_text("tau1,tau2,omega,re,im\n0.1,0.1,0,1,0\n0.1,0.5,0,1,0\n")
    with pytest.raises(DataError, match="full grid"):
        read_estimate_csv(path)


def test_regions_and_pvalue_csvs(ensemble, estimate):
    regions = typical_regions(ensemble, 0.1)
    rows = _rows(regions_csv(estimate, regions))
    assert len(rows) == 36
    assert float(rows[5]["lower_re"]) <= float(rows[5]["upper_re"])

    field = uniform_pvalues(ensemble, estimate)
    prow = _rows(pvalues_csv(field))
    assert {"p_re", "p_im", "sign_re", "sign_im"} <= set(prow[0])
    assert prow[0]["sign_re"] in {"-1", "1"}
    mrow = _rows(pmin_csv(field))
    assert [float(r["p_min"]) for r in mrow] == field.p_min.tolist()


def test_series_csv(white_noise):
    rows = _rows(series_csv(white_noise))
    assert len(rows) == white_noise.n
    assert float(rows[0]["value"]) == white_noise.values[0]


# ---------------------------------------------------------------------------
# Plots
# ---------------------------------------------------------------------------

def test_panel_layout():
    assert panel_pair(0, 0) == (0, 0, "re")
    assert panel_pair(1, 0) == (0, 1, "re")
    assert panel_pair(0, 2) == (2, 0, "im")
    assert panel_pair(2, 1) == (1, 2, "re")


def test_grid_plot_csv_matches_panels(ensemble, estimate):
    regions = typical_regions(ensemble, 0.1)
    doc = emit_grid_plot(estimate, regions, title="check")
    ET.fromstring(doc.svg)
    rows = _rows(doc.csv)
    assert len(rows) == 9 * 4
    # panel (row 1, col 0) is Re f(0.1, 0.5)
    panel = [r for r in rows if r["row"] == "1" and r["col"] == "0"]
    assert {r["part"] for r in panel} == {"re"}
    assert (panel[0]["tau1"], panel[0]["tau2"]) == ("0.10000000000000001", "0.5")
    assert float(panel[2]["value"]) == estimate.values[0, 1, 2].real
    assert float(panel[2]["lower"]) == regions.lower_re[0, 1, 2]
    # panel (row 0, col 2) is Im f(0.9, 0.1)
    top = [r for r in rows if r["row"] == "0" and r["col"] == "2"]
    assert {r["part"] for r in top} == {"im"}
    assert float(top[1]["value"]) == estimate.values[2, 0, 1].imag


def test_grid_plot_without_regions_is_deterministic(estimate):
    a = emit_grid_plot(estimate, fixed_ylim=True)
    b = emit_grid_plot(estimate, fixed_ylim=True)
    assert a.svg == b.svg
    assert a.csv == b.csv
    assert _rows(a.csv)[0]["lower"] == ""


def test_grid_plot_on_a_finer_grid_picks_display_levels(white_noise):
    cfg = EstimatorConfig(taus=tuple(QuantileGrid.equispaced(19).levels.tolist()), omegas=(0.5, 1.0))
    doc = emit_grid_plot(cfg.estimate(white_noise))
    assert {r["tau1"] for r in _rows(doc.csv)} == {"0.10000000000000001", "0.5", "0.90000000000000002"}


def test_summary_plot_marks_zeros_at_one_over_R(ensemble, estimate):
    far = SpectralMatrix(estimate.tau_grid, estimate.freq_grid, np.full((3, 3, 4), 10.0 + 0j))
    field = uniform_pvalues(ensemble, far)
    doc = emit_summary_plot(field, title="p_min")
    ET.fromstring(doc.svg)
    rows = _rows(doc.csv)
    assert len(rows) == 4
    assert all(r["zero"] == "1" for r in rows)
    assert all(float(r["x"]) == 1 / 20 for r in rows)


def test_triangle_count_thresholds():
    assert [triangle_count(p) for p in (0.2, 0.05, 0.049, 0.01, 0.009, 0.001, 0.0)] == [0, 0, 1, 1, 2, 2, 3]


def test_detail_plot_uses_real_below_and_imaginary_above_diagonal(ensemble, estimate):
    far = SpectralMatrix(
        estimate.tau_grid, estimate.freq_grid,
        np.full((3, 3, 4), -10.0 + 0j) + 1j * np.array([[0, 10, 10], [-10, 0, 10], [-10, -10, 0]])[:, :, None],
    )
    field = uniform_pvalues(ensemble, far)
    doc = emit_detail_plot(field, math.pi / 2)
    ET.fromstring(doc.svg)
    rows = _rows(doc.csv)
    # every cell is significant at p = 0: three triangles each
    assert len(rows) == 9 * 3
    lower = [r for r in rows if int(r["row"]) >= int(r["col"])]
    upper = [r for r in rows if int(r["row"]) < int(r["col"])]
    assert {r["part"] for r in lower} == {"re"} and {r["sign"] for r in lower} == {"-1"}
    assert {r["part"] for r in upper} == {"im"} and {r["sign"] for r in upper} == {"1"}


def test_acf_plot(white_noise):
    doc = emit_acf_plot(white_noise, max_lag=5)
    ET.fromstring(doc.svg)
    rows = _rows(doc.csv)
    assert [r["series"] for r in rows] == ["x"] * 5 + ["x2"] * 5


def test_calibration_plots_and_csvs(tmp_path):
    reports = self_calibration_check(
        ARSpec(coeffs=(0.3,)), 64, 4, 2, 0.1, 3,
        model_class="ar", p=1, bandwidths=(0.2, 0.4), omegas=FrequencyGrid(np.array([1.0, 2.0])), burn_in=50,
    )
    cov = emit_coverage_plot(reports, title="coverage")
    rej = emit_rejection_plot(reports)
    ET.fromstring(cov.svg)
    assert len(_rows(cov.csv)) == 9 * 2 * 2
    assert len(_rows(rej.csv)) == 2 * 2
    assert len(_rows(coverage_csv(reports))) == 2 * 9 * 2
    assert {r["bandwidth"] for r in _rows(rejection_csv(reports))} == {"0.20000000000000001", "0.40000000000000002"}
    svg_path, csv_path = rej.save(tmp_path, "rejection")
    assert svg_path.name == "rejection.svg" and csv_path.read_text() == rej.csv


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def test_config_defaults():
    cfg = load_run_config()
    assert cfg.R == 1000 and cfg.alpha == 0.05 and cfg.beta == 0.1
    assert cfg.taus == (0.1, 0.5, 0.9)
    assert len(cfg.pvalue_taus) == 19
    assert len(cfg.freq_grid) == 33
    assert cfg.kernel_spec == KernelSpec(bandwidth=0.1)


def test_config_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("COPSPEC_SEED", "3")
    monkeypatch.setenv("COPSPEC_R", "50")
    monkeypatch.setenv("COPSPEC_ALPHA", "0.2")
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("# study settings\nR = 200\nbandwidth = 0.3\n")
    cfg = load_run_config(cfg_file, {"R": 400, "bandwidth": None})
    assert cfg.R == 400           # flag beats file and env
    assert cfg.bandwidth == 0.3   # file beats default; None flag ignored
    assert cfg.seed == 3          # env beats default
    assert cfg.alpha == 0.2


def test_dotenv_file_in_working_directory(tmp_path, monkeypatch):
    (tmp_path / ".env").write_text("COPSPEC_N_JOBS=3\n")
    try:
        assert load_run_config().n_jobs == 3
    finally:
        os.environ.pop("COPSPEC_N_JOBS", None)


def test_config_rejects_unknown_keys(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("R = 10\nbandwith = 0.2\n")
    with pytest.raises(ConfigError, match="bandwith"):
        read_config_file(cfg_file)
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.cfg")


@pytest.mark.parametrize(
    "overrides",
    [{"R": 1}, {"alpha": 1.5}, {"taus": "0.5,0.1"}, {"model_class": "var"}, {"bandwidth": 0}, {"seed": -1}],
)
def test_config_rejects_bad_values(overrides):
    with pytest.raises(ConfigError):
        load_run_config(None, overrides)


def test_tau_lists_parse_from_text():
    cfg = load_run_config(None, {"taus": "0.2, 0.4;0.8", "pvalue_taus": "0.25,0.75"})
    assert cfg.taus == (0.2, 0.4, 0.8)
    assert cfg.estimator_config().taus == (0.2, 0.4, 0.8)
    assert cfg.estimator_config(cfg.pvalue_taus).taus == (0.25, 0.75)
