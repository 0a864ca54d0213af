"""CSV renderings of estimates, regions, p-values and calibration reports.

Every float is printed with ``%.17g`` so reading a file back reproduces the
stored doubles exactly.  Rows are ordered tau1-major, then tau2, then omega.
"""

from __future__ import annotations

import csv
import io
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np

from ..diagnostics.calibration import CalibrationReport
from ..diagnostics.pvalues import PValueField
from ..diagnostics.regions import TypicalRegions
from ..errors import DataError, InvalidInputError
from ..spectra.schema import FrequencyGrid, QuantileGrid, SpectralMatrix, TimeSeries
from .files import write_atomic

logger = logging.getLogger(__name__)

ESTIMATE_COLUMNS = ("tau1", "tau2", "omega", "re", "im")


def fmt(x: float) -> str:
    return "%.17g" % x


def render_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _grid_rows(tau_grid: QuantileGrid, freq_grid: FrequencyGrid, *fields: np.ndarray):
    taus, omegas = tau_grid.levels, freq_grid.omegas
    for i, t1 in enumerate(taus):
        for j, t2 in enumerate(taus):
            for k, w in enumerate(omegas):
                yield (float(t1), float(t2), float(w), *(f[i, j, k] for f in fields))


# ---------------------------------------------------------------------------
# Estimates
# ---------------------------------------------------------------------------

def estimate_csv(estimate: SpectralMatrix) -> str:
    header = list(ESTIMATE_COLUMNS)
    fields = [estimate.values.real, estimate.values.imag]
    if estimate.std_error is not None:
        header += ["se_re", "se_im"]
        fields += [estimate.std_error.real, estimate.std_error.imag]
    return render_csv(header, _grid_rows(estimate.tau_grid, estimate.freq_grid, *fields))


def write_estimate_csv(estimate: SpectralMatrix, path: Path) -> Path:
    return write_atomic(path, estimate_csv(estimate))


def read_estimate_csv(path: Path) -> SpectralMatrix:
    """Inverse of write_estimate_csv; the grids are recovered from the rows."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"estimate file not found: {path}")
    with path.open(encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or tuple(header[:5]) != ESTIMATE_COLUMNS:
            raise DataError(f"expected columns {','.join(ESTIMATE_COLUMNS)}", line=1)
        try:
            rows = [[float(c) for c in row] for row in reader]
        except ValueError as exc:
            raise DataError(f"{path.name}: {exc}") from exc
    if not rows:
        raise DataError(f"{path.name}: no rows")
    table = np.array(rows)
    taus = np.unique(table[:, 0])
    omegas = np.unique(table[:, 2])
    k, f = taus.size, omegas.size
    if table.shape[0] != k * k * f:
        raise DataError(f"{path.name}: expected {k * k * f} rows for a full grid, found {table.shape[0]}")
    block = table.reshape(k, k, f, -1)
    values = block[..., 3] + 1j * block[..., 4]
    se = block[..., 5] + 1j * block[..., 6] if table.shape[1] >= 7 else None
    try:
        return SpectralMatrix(QuantileGrid(taus), FrequencyGrid(omegas), values, std_error=se)
    except InvalidInputError as exc:
        raise DataError(f"{path.name}: {exc}") from exc


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------

def regions_csv(estimate: SpectralMatrix, regions: TypicalRegions) -> str:
    return render_csv(
        ["tau1", "tau2", "omega", "re", "im", "lower_re", "upper_re", "lower_im", "upper_im"],
        _grid_rows(
            regions.tau_grid, regions.freq_grid,
            estimate.values.real, estimate.values.imag,
            regions.lower_re, regions.upper_re, regions.lower_im, regions.upper_im,
        ),
    )


def pvalues_csv(field: PValueField) -> str:
    return render_csv(
        ["tau1", "tau2", "omega", "p_re", "p_im", "sign_re", "sign_im"],
        _grid_rows(field.tau_grid, field.freq_grid, field.p_re, field.p_im, field.sign_re, field.sign_im),
    )


def pmin_csv(field: PValueField) -> str:
    return render_csv(
        ["omega", "p_min"],
        ((float(w), float(p)) for w, p in zip(field.freq_grid.omegas, field.p_min)),
    )


def coverage_csv(reports: Sequence[CalibrationReport]) -> str:
    rows = []
    for rep in reports:
        for row in _grid_rows(
            rep.tau_grid, rep.freq_grid,
            rep.noncoverage_re, rep.noncoverage_re_se, rep.noncoverage_im, rep.noncoverage_im_se,
        ):
            rows.append((float(rep.bandwidth), *row))
    return render_csv(
        ["bandwidth", "tau1", "tau2", "omega", "noncov_re", "se_re", "noncov_im", "se_im"], rows
    )


def rejection_csv(reports: Sequence[CalibrationReport]) -> str:
    rows = [
        (float(rep.bandwidth), float(w), float(r), float(s))
        for rep in reports
        for w, r, s in zip(rep.freq_grid.omegas, rep.reject_rate, rep.reject_se)
    ]
    return render_csv(["bandwidth", "omega", "reject_rate", "reject_se"], rows)


def series_csv(series: TimeSeries) -> str:
    return render_csv(["value"], ((float(v),) for v in series.values))
