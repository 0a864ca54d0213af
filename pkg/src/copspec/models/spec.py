"""Parametric model specifications, admissibility checks and their text form.

Every class is driven by i.i.d. standard Gaussian innovations Z_t.  The canonical
text form is what CLI flags and config files use:

    ar(0.2,-0.4,0.2)
    arma(ar=[0.1],ma=[0.8])
    arch1(omega=0.04,alpha=0.3)
    garch11(omega=0.01,alpha=0.4,beta=0.5)
    egarch11(omega=0.1,alpha=0.21,gamma=-0.2,beta=0.8)

Floats are printed with repr so parse(format(spec)) == spec exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, field_validator

from ..errors import InvalidInputError

# AR/ARMA: companion-matrix spectral radius must stay below this
_RADIUS_LIMIT = 1.0 - 1e-10
# GARCH family: alpha + beta (or |beta| for EGARCH) must not exceed this
_PERSISTENCE_LIMIT = 1.0 - 1e-8
# Two polynomial roots closer than this count as shared
_COMMON_ROOT_TOL = 1e-8


class _SpecBase(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    def __str__(self) -> str:
        return format_model_spec(self)  # type: ignore[arg-type]


def _finite(values: tuple[float, ...]) -> tuple[float, ...]:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"parameter {v!r} is not finite")
    return values


class ARSpec(_SpecBase):
    """X_t = a_1 X_{t-1} + ... + a_p X_{t-p} + Z_t."""

    kind: Literal["ar"] = "ar"
    coeffs: tuple[float, ...] = ()

    @field_validator("coeffs")
    @classmethod
    def _check_finite(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        return _finite(v)

    @property
    def ar(self) -> tuple[float, ...]:
        return self.coeffs

    @property
    def ma(self) -> tuple[float, ...]:
        return ()


class ARMASpec(_SpecBase):
    """P(B) X_t = Q(B) Z_t with P(z) = 1 - sum a_i z^i and Q(z) = 1 + sum b_j z^j."""

    kind: Literal["arma"] = "arma"
    ar: tuple[float, ...] = ()
    ma: tuple[float, ...] = ()

    @field_validator("ar", "ma")
    @classmethod
    def _check_finite(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        return _finite(v)


class ARCH1Spec(_SpecBase):
    kind: Literal["arch1"] = "arch1"
    omega0: float
    alpha: float

    @property
    def beta(self) -> float:
        return 0.0


class GARCH11Spec(_SpecBase):
    """X_t = sigma_t Z_t, sigma_t^2 = omega0 + alpha X_{t-1}^2 + beta sigma_{t-1}^2."""

    kind: Literal["garch11"] = "garch11"
    omega0: float
    alpha: float
    beta: float


class EGARCH11Spec(_SpecBase):
    """X_t = sigma_t Z_t with
    ln sigma_t^2 = omega0 + alpha (|Z_{t-1}| - sqrt(2/pi)) + gamma Z_{t-1} + beta ln sigma_{t-1}^2.
    """

    kind: Literal["egarch11"] = "egarch11"
    omega0: float
    alpha: float
    gamma: float
    beta: float


ModelSpec = Annotated[
    Union[ARSpec, ARMASpec, ARCH1Spec, GARCH11Spec, EGARCH11Spec],
    Field(discriminator="kind"),
]
_SPEC_ADAPTER: TypeAdapter = TypeAdapter(ModelSpec)

LINEAR_KINDS = frozenset({"ar", "arma"})
VOLATILITY_KINDS = frozenset({"arch1", "garch11", "egarch11"})


def is_linear(spec: ModelSpec) -> bool:
    return spec.kind in LINEAR_KINDS


# ---------------------------------------------------------------------------
# Admissibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Admissibility:
    """Result of check_admissible; truthy when the spec is admissible."""

    ok: bool
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def companion_spectral_radius(coeffs: tuple[float, ...] | np.ndarray) -> float:
    """Largest eigenvalue modulus of the AR companion matrix (0 for an empty AR part)."""
    a = np.asarray(coeffs, dtype=np.float64)
    p = a.size
    if p == 0:
        return 0.0
    companion = np.zeros((p, p))
    companion[0, :] = a
    if p > 1:
        companion[1:, :-1] = np.eye(p - 1)
    return float(np.max(np.abs(np.linalg.eigvals(companion))))


def _roots(poly_low_to_high: np.ndarray) -> np.ndarray:
    """Roots of c_0 + c_1 z + ... ; trailing zero coefficients are dropped."""
    c = np.trim_zeros(np.asarray(poly_low_to_high, dtype=np.float64), "b")
    if c.size <= 1:
        return np.empty(0, dtype=np.complex128)
    return np.roots(c[::-1])


def ar_polynomial(ar: tuple[float, ...]) -> np.ndarray:
    """Coefficients of P(z) = 1 - a_1 z - ... - a_p z^p, lowest degree first."""
    return np.concatenate([[1.0], -np.asarray(ar, dtype=np.float64)])


def ma_polynomial(ma: tuple[float, ...]) -> np.ndarray:
    """Coefficients of Q(z) = 1 + b_1 z + ... + b_q z^q, lowest degree first."""
    return np.concatenate([[1.0], np.asarray(ma, dtype=np.float64)])


def check_admissible(spec: ModelSpec) -> Admissibility:
    """Check stationarity / positivity constraints of *spec*; never raises."""
    if isinstance(spec, (ARSpec, ARMASpec)):
        radius = companion_spectral_radius(spec.ar)
        if radius >= _RADIUS_LIMIT:
            return Admissibility(
                False,
                f"AR polynomial has a root on or inside the unit circle "
                f"(companion spectral radius {radius:.12g})",
            )
        if isinstance(spec, ARMASpec):
            p_roots = _roots(ar_polynomial(spec.ar))
            q_roots = _roots(ma_polynomial(spec.ma))
            if p_roots.size and q_roots.size:
                gap = np.min(np.abs(p_roots[:, None] - q_roots[None, :]))
                if gap < _COMMON_ROOT_TOL:
                    return Admissibility(False, f"AR and MA polynomials share a root (distance {gap:.3g})")
        return Admissibility(True)

    if isinstance(spec, EGARCH11Spec):
        if not all(math.isfinite(v) for v in (spec.omega0, spec.alpha, spec.gamma, spec.beta)):
            return Admissibility(False, "EGARCH parameters must be finite")
        if abs(spec.beta) > _PERSISTENCE_LIMIT:
            return Admissibility(False, f"EGARCH requires |beta| <= 1 - 1e-8, got beta = {spec.beta!r}")
        return Admissibility(True)

    # ARCH1 / GARCH11
    omega0, alpha, beta = spec.omega0, spec.alpha, spec.beta
    if not all(math.isfinite(v) for v in (omega0, alpha, beta)):
        return Admissibility(False, "GARCH parameters must be finite")
    if omega0 <= 0.0:
        return Admissibility(False, f"omega0 must be > 0, got {omega0!r}")
    if alpha < 0.0:
        return Admissibility(False, f"alpha must be >= 0, got {alpha!r}")
    if beta < 0.0:
        return Admissibility(False, f"beta must be >= 0, got {beta!r}")
    if alpha + beta > _PERSISTENCE_LIMIT:
        return Admissibility(False, f"alpha + beta must be <= 1 - 1e-8, got {alpha + beta!r}")
    return Admissibility(True)


# ---------------------------------------------------------------------------
# Canonical text form
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def _fmt_list(xs: tuple[float, ...]) -> str:
    return "[" + ",".join(_fmt(x) for x in xs) + "]"


def format_model_spec(spec: ModelSpec) -> str:
    """Canonical text form of *spec* (see module docstring)."""
    if isinstance(spec, ARSpec):
        return f"ar({','.join(_fmt(a) for a in spec.coeffs)})"
    if isinstance(spec, ARMASpec):
        return f"arma(ar={_fmt_list(spec.ar)},ma={_fmt_list(spec.ma)})"
    if isinstance(spec, ARCH1Spec):
        return f"arch1(omega={_fmt(spec.omega0)},alpha={_fmt(spec.alpha)})"
    if isinstance(spec, GARCH11Spec):
        return f"garch11(omega={_fmt(spec.omega0)},alpha={_fmt(spec.alpha)},beta={_fmt(spec.beta)})"
    return (
        f"egarch11(omega={_fmt(spec.omega0)},alpha={_fmt(spec.alpha)},"
        f"gamma={_fmt(spec.gamma)},beta={_fmt(spec.beta)})"
    )


_CALL_RE = re.compile(r"^\s*([a-z0-9]+)\s*\((.*)\)\s*$", re.IGNORECASE | re.DOTALL)
# key=value or key=[list] pairs; values never contain commas outside brackets
_ARG_RE = re.compile(r"\s*([a-z_0-9]+)\s*=\s*(\[[^\]]*\]|[^,\[\]]+)\s*(?:,|$)", re.IGNORECASE)
_PARAM_ALIASES = {"omega": "omega0"}


def _parse_float(token: str, text: str) -> float:
    try:
        return float(token.strip())
    except ValueError:
        raise InvalidInputError(f"cannot parse number {token.strip()!r} in model spec {text!r}") from None


def _parse_list(token: str, text: str) -> tuple[float, ...]:
    inner = token.strip()
    if inner.startswith("[") and inner.endswith("]"):
        inner = inner[1:-1]
    return tuple(_parse_float(t, text) for t in inner.split(",") if t.strip())


def parse_model_spec(text: str) -> ModelSpec:
    """Parse the canonical text form; raises InvalidInputError on malformed input.

    Usage::

        spec = parse_model_spec("garch11(omega=0.01,alpha=0.4,beta=0.5)")
        str(spec)   # -> "garch11(omega=0.01,alpha=0.4,beta=0.5)"
    """
    m = _CALL_RE.match(text)
    if not m:
        raise InvalidInputError(f"malformed model spec {text!r}; expected e.g. 'ar(0.5)'")
    kind, body = m.group(1).lower(), m.group(2).strip()

    data: dict[str, object] = {"kind": kind}
    if kind == "ar":
        data["coeffs"] = _parse_list(body, text)
    else:
        pos = 0
        while pos < len(body):
            am = _ARG_RE.match(body, pos)
            if not am or am.end() == pos:
                raise InvalidInputError(f"malformed arguments {body[pos:]!r} in model spec {text!r}")
            key = am.group(1).lower()
            key = _PARAM_ALIASES.get(key, key)
            value = am.group(2)
            data[key] = _parse_list(value, text) if kind == "arma" else _parse_float(value, text)
            pos = am.end()

    try:
        return _SPEC_ADAPTER.validate_python(data)
    except ValidationError as exc:
        raise InvalidInputError(f"invalid model spec {text!r}: {exc.errors()[0]['msg']}") from exc
