"""diagnostics: parametric bootstrap, typical regions, uniform p-values and calibration."""

from .calibration import CalibrationReport, self_calibration_check
from .ensemble import BootstrapEnsemble, EstimatorConfig, bootstrap_replicates, run_parametric_bootstrap
from .pvalues import DEFAULT_BETA, PValueField, bootstrap_pvalue, uniform_pvalues
from .quantiles import DEFAULT_CONVENTION, QuantileConvention, empirical_quantile
from .regions import (
    CoverageField,
    TypicalRegions,
    coverage_indicator,
    regions_from_replicates,
    typical_regions,
)

__all__ = [
    "BootstrapEnsemble",
    "CalibrationReport",
    "CoverageField",
    "DEFAULT_BETA",
    "DEFAULT_CONVENTION",
    "EstimatorConfig",
    "PValueField",
    "QuantileConvention",
    "TypicalRegions",
    "bootstrap_pvalue",
    "bootstrap_replicates",
    "coverage_indicator",
    "empirical_quantile",
    "regions_from_replicates",
    "run_parametric_bootstrap",
    "self_calibration_check",
    "typical_regions",
    "uniform_pvalues",
]
