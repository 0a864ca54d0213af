"""FitResult: a fitted model spec plus optimizer diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

from ..models.spec import ModelSpec, format_model_spec


@dataclass(frozen=True)
class FitResult:
    spec: ModelSpec
    objective_value: float  # negative Gaussian quasi-log-likelihood, or residual variance for linear fits
    converged: bool
    iterations: int
    method: str = ""        # "yule-walker", "hannan-rissanen", "hannan-rissanen+css", "qmle"

    def __str__(self) -> str:
        return f"{format_model_spec(self.spec)} objective={self.objective_value!r}"
