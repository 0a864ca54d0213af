"""SVG figures plus the CSV of exactly the values they draw.

Panel layout of the 3x3 grid (rows top to bottom, columns left to right)::

    f(t1,t1)      Im f(t2,t1)   Im f(t3,t1)
    Re f(t1,t2)   f(t2,t2)      Im f(t3,t2)
    Re f(t1,t3)   Re f(t2,t3)   f(t3,t3)

i.e. panel (r, c) shows the pair (t_c, t_r), its real part on and below the
diagonal and its imaginary part above it.
"""

from __future__ import annotations

import io
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")  # Non-interactive backend, SVG output only

import matplotlib.pyplot as plt
import numpy as np

from ..diagnostics.calibration import CalibrationReport
from ..diagnostics.pvalues import PValueField
from ..diagnostics.regions import TypicalRegions
from ..errors import InvalidInputError
from ..spectra.acf import sample_autocorrelations
from ..spectra.schema import QuantileGrid, SpectralMatrix, TimeSeries
from .export import render_csv
from .files import write_atomic

logger = logging.getLogger(__name__)

# Fixed SVG ids and no timestamp: identical inputs give identical bytes
_SVG_RC = {"svg.hashsalt": "copspec", "svg.fonttype": "path", "path.simplify": False}
_SIGNIFICANCE = (0.05, 0.01, 0.001)
_UP, _DOWN = "#d62728", "#1f77b4"


@dataclass(frozen=True)
class PlotDocument:
    svg: bytes
    csv: str

    def save(self, directory: Path, stem: str) -> tuple[Path, Path]:
        """Write ``<stem>.svg`` and ``<stem>.csv`` under *directory*."""
        directory = Path(directory)
        svg_path = write_atomic(directory / f"{stem}.svg", self.svg)
        csv_path = write_atomic(directory / f"{stem}.csv", self.csv)
        logger.info("Wrote %s and %s", svg_path, csv_path.name)
        return svg_path, csv_path


def _render(fig) -> bytes:
    buf = io.BytesIO()
    try:
        with matplotlib.rc_context(_SVG_RC):
            fig.savefig(buf, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return buf.getvalue()


def panel_pair(r: int, c: int) -> tuple[int, int, str]:
    """(tau1 index, tau2 index, part) drawn in grid panel (r, c)."""
    return c, r, ("re" if r >= c else "im")


def _label(part: str, t1: float, t2: float) -> str:
    if t1 == t2:
        return f"f({t1:g},{t2:g})"
    return f"{'Re' if part == 're' else 'Im'} f({t1:g},{t2:g})"


def _display_indices(grid: QuantileGrid, taus: QuantileGrid) -> np.ndarray:
    try:
        return np.array([grid.index_of(t) for t in taus.levels])
    except InvalidInputError as exc:
        raise InvalidInputError(f"cannot draw the requested levels: {exc}") from exc


# ---------------------------------------------------------------------------
# Spectra
# ---------------------------------------------------------------------------

def emit_grid_plot(
    estimate: SpectralMatrix,
    regions: TypicalRegions | None = None,
    taus: QuantileGrid | None = None,
    *,
    fixed_ylim: bool = False,
    title: str = "",
) -> PlotDocument:
    """K x K panels of the estimate against omega, over the typical-region band if given.

    Usage::

        doc = emit_grid_plot(estimate, typical_regions(ens, 0.05))
        doc.save(Path("out"), "regions_grid")
    """
    taus = taus or QuantileGrid.plot_default()
    idx = _display_indices(estimate.tau_grid, taus)
    if regions is not None:
        if regions.freq_grid != estimate.freq_grid:
            raise InvalidInputError("typical regions and estimate use different frequency grids")
        ridx = _display_indices(regions.tau_grid, taus)
    k = len(taus)
    omegas = estimate.freq_grid.omegas

    fig, axes = plt.subplots(k, k, figsize=(3.2 * k, 2.6 * k), sharex=True, sharey=fixed_ylim, squeeze=False)
    rows = []
    for r in range(k):
        for c in range(k):
            a, b, part = panel_pair(r, c)
            ax = axes[r][c]
            values = estimate.values[idx[a], idx[b]]
            curve = values.real if part == "re" else values.imag
            lower = upper = None
            if regions is not None:
                lo = regions.lower_re if part == "re" else regions.lower_im
                hi = regions.upper_re if part == "re" else regions.upper_im
                lower, upper = lo[ridx[a], ridx[b]], hi[ridx[a], ridx[b]]
                ax.fill_between(omegas, lower, upper, color="0.8", linewidth=0)
            ax.plot(omegas, curve, color="black", linewidth=1.0)
            ax.set_xlim(0.0, math.pi)
            ax.set_title(_label(part, taus.levels[a], taus.levels[b]), fontsize=9)
            ax.tick_params(labelsize=7)
            for m, w in enumerate(omegas):
                rows.append((
                    r, c, float(taus.levels[a]), float(taus.levels[b]), part, float(w), float(curve[m]),
                    "" if lower is None else float(lower[m]),
                    "" if upper is None else float(upper[m]),
                ))
    for ax in axes[-1]:
        ax.set_xlabel("omega", fontsize=8)
    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    csv = render_csv(["row", "col", "tau1", "tau2", "part", "omega", "value", "lower", "upper"], rows)
    return PlotDocument(_render(fig), csv)


# ---------------------------------------------------------------------------
# p-values
# ---------------------------------------------------------------------------

def emit_summary_plot(pfield: PValueField, *, title: str = "") -> PlotDocument:
    """p_min per omega on a log p axis from 1/R to 1; zeros as red circles at 1/R."""
    floor = 1.0 / pfield.R
    omegas = pfield.freq_grid.omegas
    p = pfield.p_min
    zero = p == 0.0
    x = np.where(zero, floor, p)

    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    ax.set_xscale("log")
    ax.set_xlim(floor, 1.0)
    ax.set_ylim(-0.05 * math.pi, 1.05 * math.pi)
    for level in _SIGNIFICANCE:
        ax.axvline(level, color="0.6", linestyle="--", linewidth=0.8)
    ax.plot(x[~zero], omegas[~zero], linestyle="none", marker="o", markersize=3, color="black")
    ax.plot(x[zero], omegas[zero], linestyle="none", marker="o", markersize=6,
            markerfacecolor="none", markeredgecolor="red", clip_on=False)
    ax.set_xlabel("p_min")
    ax.set_ylabel("omega")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    rows = [(float(w), float(pv), float(xv), int(z)) for w, pv, xv, z in zip(omegas, p, x, zero)]
    return PlotDocument(_render(fig), render_csv(["omega", "p_min", "x", "zero"], rows))


def triangle_count(p: float) -> int:
    """1, 2 or 3 for p below 0.05, 0.01, 0.001; 0 otherwise."""
    return sum(1 for level in _SIGNIFICANCE if p < level)


def emit_detail_plot(pfield: PValueField, omega: float, *, title: str = "") -> PlotDocument:
    """K x K cells at one frequency: cell (row i, col j) carries Re for i >= j and Im for i < j.

    Each significant cell holds 1-3 stacked triangles, red and pointing up for a
    positive deviation from the bootstrap centre, blue and pointing down otherwise.
    """
    p_re, p_im, s_re, s_im = pfield.at(omega)
    levels = pfield.tau_grid.levels
    k = levels.size

    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.set_xlim(-0.5, k - 0.5)
    ax.set_ylim(k - 0.5, -0.5)
    ax.set_aspect("equal")
    ax.set_xticks(np.arange(k))
    ax.set_yticks(np.arange(k))
    ax.set_xticklabels([f"{t:g}" for t in levels], rotation=90, fontsize=6)
    ax.set_yticklabels([f"{t:g}" for t in levels], fontsize=6)
    ax.set_xticks(np.arange(k + 1) - 0.5, minor=True)
    ax.set_yticks(np.arange(k + 1) - 0.5, minor=True)
    ax.grid(which="minor", color="0.85", linewidth=0.5)
    ax.tick_params(which="minor", length=0)

    rows = []
    for i in range(k):
        for j in range(k):
            part = "re" if i >= j else "im"
            p = float(p_re[i, j] if part == "re" else p_im[i, j])
            sign = int(s_re[i, j] if part == "re" else s_im[i, j])
            count = triangle_count(p)
            for t in range(count):
                dx = (t - (count - 1) / 2.0) * 0.28
                ax.plot(j + dx, i, linestyle="none", marker="^" if sign > 0 else "v",
                        markersize=5, color=_UP if sign > 0 else _DOWN)
                rows.append((i, j, float(levels[i]), float(levels[j]), part, p, sign, t + 1))
    ax.set_title(title or f"omega = {omega:.4g}", fontsize=10)
    fig.tight_layout()
    csv = render_csv(["row", "col", "tau1", "tau2", "part", "p", "sign", "triangle"], rows)
    return PlotDocument(_render(fig), csv)


# ---------------------------------------------------------------------------
# Calibration
# ---------------------------------------------------------------------------

def emit_coverage_plot(reports: Sequence[CalibrationReport], *, title: str = "") -> PlotDocument:
    """3x3 panels of non-coverage rate against omega, one line per bandwidth."""
    if not reports:
        raise InvalidInputError("no calibration reports to plot")
    taus = reports[0].tau_grid
    k = len(taus)
    alpha = reports[0].alpha
    fig, axes = plt.subplots(k, k, figsize=(3.2 * k, 2.6 * k), sharex=True, sharey=True, squeeze=False)
    rows = []
    for r in range(k):
        for c in range(k):
            a, b, part = panel_pair(r, c)
            ax = axes[r][c]
            ax.axhline(alpha, color="0.5", linestyle="--", linewidth=0.8)
            for rep in reports:
                rate = (rep.noncoverage_re if part == "re" else rep.noncoverage_im)[a, b]
                omegas = rep.freq_grid.omegas
                ax.plot(omegas, rate, linewidth=1.0, label=f"b={rep.bandwidth:g}")
                rows.extend(
                    (r, c, float(taus.levels[a]), float(taus.levels[b]), part,
                     float(rep.bandwidth), float(w), float(v))
                    for w, v in zip(omegas, rate)
                )
            ax.set_xlim(0.0, math.pi)
            ax.set_ylim(0.0, 1.0)
            ax.set_title(_label(part, taus.levels[a], taus.levels[b]), fontsize=9)
            ax.tick_params(labelsize=7)
    axes[0][0].legend(fontsize=6)
    if title:
        fig.suptitle(title, fontsize=10)
    fig.tight_layout()
    csv = render_csv(["row", "col", "tau1", "tau2", "part", "bandwidth", "omega", "noncoverage"], rows)
    return PlotDocument(_render(fig), csv)


def emit_rejection_plot(reports: Sequence[CalibrationReport], *, title: str = "") -> PlotDocument:
    """P(p_min <= alpha) against omega, one line per bandwidth, with the nominal level."""
    if not reports:
        raise InvalidInputError("no calibration reports to plot")
    alpha = reports[0].alpha
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.axhline(alpha, color="0.5", linestyle="--", linewidth=0.8)
    rows = []
    for rep in reports:
        omegas = rep.freq_grid.omegas
        ax.plot(omegas, rep.reject_rate, linewidth=1.0, marker="o", markersize=2, label=f"b={rep.bandwidth:g}")
        rows.extend((float(rep.bandwidth), float(w), float(v)) for w, v in zip(omegas, rep.reject_rate))
    ax.set_xlim(0.0, math.pi)
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel("omega")
    ax.set_ylabel(f"P(p_min <= {alpha:g})")
    ax.legend(fontsize=7)
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    return PlotDocument(_render(fig), render_csv(["bandwidth", "omega", "reject_rate"], rows))


def emit_acf_plot(series: TimeSeries, max_lag: int = 20) -> PlotDocument:
    """Sample ACF of X and of X^2 with the +-1.96/sqrt(n) white-noise band."""
    band = 1.96 / math.sqrt(series.n)
    lags = np.arange(1, max_lag + 1)
    fig, axes = plt.subplots(2, 1, figsize=(6.0, 5.0), sharex=True)
    rows = []
    for ax, squared, name in zip(axes, (False, True), ("x", "x2")):
        acf = sample_autocorrelations(series, max_lag, squared=squared)
        ax.vlines(lags, 0.0, acf, color="black", linewidth=1.2)
        ax.axhline(0.0, color="black", linewidth=0.5)
        ax.axhline(band, color="#1f77b4", linestyle="--", linewidth=0.8)
        ax.axhline(-band, color="#1f77b4", linestyle="--", linewidth=0.8)
        ax.set_ylabel("ACF of X^2" if squared else "ACF of X")
        rows.extend((name, int(h), float(v)) for h, v in zip(lags, acf))
    axes[-1].set_xlabel("lag")
    fig.tight_layout()
    return PlotDocument(_render(fig), render_csv(["series", "lag", "acf"], rows))
