"""io: run configuration, data ingestion, ensemble persistence, CSV export and SVG plots."""

from .config import RunConfig, load_run_config, read_config_file
from .export import (
    coverage_csv,
    estimate_csv,
    pmin_csv,
    pvalues_csv,
    read_estimate_csv,
    regions_csv,
    rejection_csv,
    series_csv,
    write_estimate_csv,
)
from .files import write_atomic
from .ingest import ingest_csv, ingest_values
from .persist import FORMAT_VERSION, EnsembleHeader, load_ensemble, persist_ensemble
from .plots import (
    PlotDocument,
    emit_acf_plot,
    emit_coverage_plot,
    emit_detail_plot,
    emit_grid_plot,
    emit_rejection_plot,
    emit_summary_plot,
    panel_pair,
    triangle_count,
)

__all__ = [
    "EnsembleHeader",
    "FORMAT_VERSION",
    "PlotDocument",
    "RunConfig",
    "coverage_csv",
    "emit_acf_plot",
    "emit_coverage_plot",
    "emit_detail_plot",
    "emit_grid_plot",
    "emit_rejection_plot",
    "emit_summary_plot",
    "estimate_csv",
    "ingest_csv",
    "ingest_values",
    "load_ensemble",
    "load_run_config",
    "panel_pair",
    "persist_ensemble",
    "pmin_csv",
    "pvalues_csv",
    "read_config_file",
    "read_estimate_csv",
    "regions_csv",
    "rejection_csv",
    "series_csv",
    "triangle_count",
    "write_atomic",
    "write_estimate_csv",
]
