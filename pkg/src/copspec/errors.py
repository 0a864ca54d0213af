"""Exception hierarchy shared by every copspec subpackage.

The CLI maps these onto exit codes (see :mod:`copspec.cli`):
    ConfigError                    → 1
    InvalidInputError / DataError  → 2
    FitError / ReplicateError      → 3
"""

from __future__ import annotations

from typing import Any


class CopspecError(Exception):
    """Base class for all errors raised by copspec."""


class InvalidInputError(CopspecError, ValueError):
    """An argument or data value violates a documented precondition."""


class PreconditionError(InvalidInputError):
    """A model specification or configuration is not admissible for the operation."""


class ConfigError(InvalidInputError):
    """A configuration key is unknown or an option value is malformed."""


class UnsupportedModelError(InvalidInputError):
    """An analytic routine was asked for a model class it cannot handle."""


class DataError(CopspecError):
    """Input data could not be read or parsed.

    ``line`` is the 1-indexed line number of the offending row when known.
    """

    def __init__(self, message: str, *, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EnsembleFormatError(DataError):
    """A persisted ensemble file is corrupt, truncated, or from another version."""

    def __init__(
        self,
        message: str,
        *,
        expected: int | None = None,
        found: int | None = None,
    ) -> None:
        if expected is not None and found is not None:
            message = f"{message} (expected {expected} bytes, found {found})"
        super().__init__(message)
        self.expected = expected
        self.found = found


class FitError(CopspecError):
    """Parameter estimation failed; ``diagnostics`` holds per-start details."""

    def __init__(self, message: str, *, diagnostics: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ReplicateError(CopspecError):
    """A bootstrap replicate failed; ``index`` is the replicate number."""

    def __init__(self, index: int, cause: BaseException) -> None:
        super().__init__(f"replicate {index} failed: {cause}")
        self.index = index
        self.cause = cause
