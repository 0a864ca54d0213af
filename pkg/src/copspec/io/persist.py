"""Binary persistence of bootstrap ensembles.

Layout::

    8 bytes   magic  b"COPSPEC\\x00"
    4 bytes   header length L, unsigned little-endian
    L bytes   UTF-8 JSON header (EnsembleHeader)
    rest      complex128 little-endian payload, row-major (replicate, tau1, tau2, omega)
"""

from __future__ import annotations

import logging
import struct
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from ..diagnostics.ensemble import BootstrapEnsemble, EstimatorConfig
from ..errors import CopspecError, EnsembleFormatError
from ..fitting.result import FitResult
from ..models.spec import format_model_spec, parse_model_spec
from ..spectra.schema import KernelSpec
from .files import write_atomic

logger = logging.getLogger(__name__)

MAGIC = b"COPSPEC\x00"
FORMAT_VERSION = 1
_LENGTH = struct.Struct("<I")
_PAYLOAD_DTYPE = np.dtype("<c16")


class EnsembleHeader(BaseModel):
    model_config = ConfigDict(frozen=True)

    version: int = FORMAT_VERSION
    fitted_spec: str
    objective_value: float
    converged: bool
    iterations: int
    method: str = ""
    seed: int
    R: int
    taus: list[float]
    omegas: list[float]
    kernel: KernelSpec

    @property
    def shape(self) -> tuple[int, int, int, int]:
        k = len(self.taus)
        return (self.R, k, k, len(self.omegas))


def persist_ensemble(ensemble: BootstrapEnsemble, path: Path) -> Path:
    """Write *ensemble* to *path* atomically."""
    fitted = ensemble.fitted
    header = EnsembleHeader(
        fitted_spec=format_model_spec(fitted.spec),
        objective_value=fitted.objective_value,
        converged=fitted.converged,
        iterations=fitted.iterations,
        method=fitted.method,
        seed=ensemble.seed,
        R=ensemble.R,
        taus=list(ensemble.config.taus),
        omegas=list(ensemble.config.omegas),
        kernel=ensemble.config.kernel,
    )
    head = header.model_dump_json().encode("utf-8")
    payload = np.ascontiguousarray(ensemble.replicates, dtype=_PAYLOAD_DTYPE).tobytes()
    out = write_atomic(path, MAGIC + _LENGTH.pack(len(head)) + head + payload)
    logger.info("Saved ensemble (R=%d) to %s", ensemble.R, out)
    return out


def load_ensemble(path: Path) -> BootstrapEnsemble:
    """Read an ensemble written by persist_ensemble; bit-exact in every numeric field."""
    path = Path(path)
    if not path.is_file():
        raise EnsembleFormatError(f"ensemble file not found: {path}")
    blob = path.read_bytes()

    prefix = len(MAGIC) + _LENGTH.size
    if len(blob) < prefix or not blob.startswith(MAGIC):
        raise EnsembleFormatError(f"{path} is not a copspec ensemble file")
    (head_len,) = _LENGTH.unpack_from(blob, len(MAGIC))
    if len(blob) < prefix + head_len:
        raise EnsembleFormatError(
            f"{path}: truncated header", expected=prefix + head_len, found=len(blob)
        )
    try:
        header = EnsembleHeader.model_validate_json(blob[prefix : prefix + head_len])
    except ValidationError as exc:
        raise EnsembleFormatError(f"{path}: corrupt header: {exc}") from exc
    if header.version != FORMAT_VERSION:
        raise EnsembleFormatError(
            f"{path}: format version {header.version} is incompatible with version {FORMAT_VERSION}"
        )

    payload = blob[prefix + head_len :]
    expected = int(np.prod(header.shape)) * _PAYLOAD_DTYPE.itemsize
    if len(payload) != expected:
        raise EnsembleFormatError(
            f"{path}: payload size mismatch", expected=expected, found=len(payload)
        )
    replicates = np.frombuffer(payload, dtype=_PAYLOAD_DTYPE).reshape(header.shape)

    try:
        fitted = FitResult(
            spec=parse_model_spec(header.fitted_spec),
            objective_value=header.objective_value,
            converged=header.converged,
            iterations=header.iterations,
            method=header.method,
        )
        config = EstimatorConfig(taus=tuple(header.taus), omegas=tuple(header.omegas), kernel=header.kernel)
        ensemble = BootstrapEnsemble(fitted, replicates, config, header.seed)
    except (CopspecError, ValidationError) as exc:
        raise EnsembleFormatError(f"{path}: inconsistent header: {exc}") from exc
    logger.info("Loaded ensemble (R=%d) from %s", ensemble.R, path)
    return ensemble
