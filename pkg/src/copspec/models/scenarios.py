"""Named data-generating processes and candidate model classes of the simulation study."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from ..errors import InvalidInputError
from .spec import ARMASpec, ARSpec, EGARCH11Spec, GARCH11Spec, ModelSpec

ModelClass = Literal["ar", "arma", "arch1", "garch11", "egarch11"]
MODEL_CLASSES: tuple[str, ...] = ("ar", "arma", "arch1", "garch11", "egarch11")

_GARCH = GARCH11Spec(omega0=0.01, alpha=0.4, beta=0.5)
_EGARCH = EGARCH11Spec(omega0=0.1, alpha=0.21, gamma=-0.2, beta=0.8)
_AR3 = ARSpec(coeffs=(0.2, -0.4, 0.2))

SCENARIOS: dict[str, ModelSpec] = {
    # correctly specified settings
    "a0": ARMASpec(ar=(0.1,), ma=(0.8,)),
    "b0": _AR3,
    "c0": _GARCH,
    # misspecified settings
    "a1": _AR3,
    "b1": _GARCH,
    "c1": _EGARCH,
    # processes of the reference 3x3 figure
    "fig_ar1": ARSpec(coeffs=(0.5,)),
    "fig_ma1": ARMASpec(ar=(), ma=(0.5,)),
    "fig_garch": _GARCH,
    "fig_egarch": _EGARCH,
}


@dataclass(frozen=True)
class CandidateClass:
    """A model class tag plus the ARMA orders it is fitted with."""

    model_class: str
    p: int = 0
    q: int = 0


CANDIDATE_CLASSES: dict[str, CandidateClass] = {
    "Pa": CandidateClass("arma", p=1, q=1),
    "Pb": CandidateClass("ar", p=3),
    "Pc": CandidateClass("garch11"),
}

# (scenario, candidate) pairs of the simulation study
STUDY_PAIRS: tuple[tuple[str, str], ...] = (
    ("a0", "Pa"), ("b0", "Pb"), ("c0", "Pc"),
    ("a1", "Pa"), ("b1", "Pb"), ("c1", "Pc"),
)


def scenario(name: str) -> ModelSpec:
    """Return the named data-generating process."""
    try:
        return SCENARIOS[name.strip().lower()]
    except KeyError:
        raise InvalidInputError(
            f"unknown scenario {name!r}; known: {', '.join(sorted(SCENARIOS))}"
        ) from None


def candidate_class(name: str) -> CandidateClass:
    """Return the candidate class by study name (Pa/Pb/Pc)."""
    for key, value in CANDIDATE_CLASSES.items():
        if key.lower() == name.strip().lower():
            return value
    raise InvalidInputError(
        f"unknown candidate class {name!r}; known: {', '.join(CANDIDATE_CLASSES)}"
    )


def check_model_class(model_class: str) -> str:
    tag = model_class.strip().lower()
    if tag not in MODEL_CLASSES:
        raise InvalidInputError(
            f"unknown model class {model_class!r}; expected one of {', '.join(MODEL_CLASSES)}"
        )
    return tag
