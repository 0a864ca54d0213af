"""Fit a candidate model class by tag."""

from __future__ import annotations

from ..models.scenarios import check_model_class
from ..spectra.schema import TimeSeries
from .garch import fit_garch
from .linear import fit_ar, fit_arma
from .result import FitResult


def fit_class(
    series: TimeSeries,
    model_class: str,
    p: int = 0,
    q: int = 0,
    *,
    n_jobs: int = 1,
) -> FitResult:
    """Dispatch to fit_ar / fit_arma / fit_garch; p and q only matter for ar/arma."""
    tag = check_model_class(model_class)
    if tag == "ar":
        return fit_ar(series, p)
    if tag == "arma":
        return fit_arma(series, p, q)
    return fit_garch(series, tag, n_jobs=n_jobs)
