"""models: parametric model specs, admissibility, simulation and random streams."""

from .scenarios import (
    CANDIDATE_CLASSES,
    MODEL_CLASSES,
    SCENARIOS,
    STUDY_PAIRS,
    CandidateClass,
    ModelClass,
    candidate_class,
    check_model_class,
    scenario,
)
from .simulate import DEFAULT_BURN_IN, SimConfig, simulate, simulate_values
from .spec import (
    ARCH1Spec,
    ARMASpec,
    ARSpec,
    Admissibility,
    EGARCH11Spec,
    GARCH11Spec,
    ModelSpec,
    check_admissible,
    companion_spectral_radius,
    format_model_spec,
    is_linear,
    parse_model_spec,
)
from .streams import child_seed, derive_stream

__all__ = [
    "ARCH1Spec",
    "ARMASpec",
    "ARSpec",
    "Admissibility",
    "CANDIDATE_CLASSES",
    "CandidateClass",
    "DEFAULT_BURN_IN",
    "EGARCH11Spec",
    "GARCH11Spec",
    "MODEL_CLASSES",
    "ModelClass",
    "ModelSpec",
    "SCENARIOS",
    "STUDY_PAIRS",
    "SimConfig",
    "candidate_class",
    "check_admissible",
    "check_model_class",
    "child_seed",
    "companion_spectral_radius",
    "derive_stream",
    "format_model_spec",
    "is_linear",
    "parse_model_spec",
    "scenario",
    "simulate",
    "simulate_values",
]
