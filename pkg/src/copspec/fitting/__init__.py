"""fitting: parameter estimation for the candidate model classes."""

from .dispatch import fit_class
from .garch import (
    GARCH_VARIANTS,
    MIN_GARCH_LENGTH,
    conditional_variances,
    fit_garch,
    from_unconstrained,
    qmle_objective,
    to_unconstrained,
)
from .linear import css_objective, fit_ar, fit_arma, project_stationary, sample_autocovariances
from .nelder_mead import NelderMeadResult, nelder_mead
from .result import FitResult

__all__ = [
    "FitResult",
    "GARCH_VARIANTS",
    "MIN_GARCH_LENGTH",
    "NelderMeadResult",
    "conditional_variances",
    "css_objective",
    "fit_ar",
    "fit_arma",
    "fit_class",
    "fit_garch",
    "from_unconstrained",
    "nelder_mead",
    "project_stationary",
    "qmle_objective",
    "sample_autocovariances",
    "to_unconstrained",
]
