"""Read a one-column numeric CSV into a TimeSeries."""

from __future__ import annotations

import logging
import math
from pathlib import Path

import numpy as np

from ..errors import DataError, InvalidInputError
from ..spectra.schema import TimeSeries

logger = logging.getLogger(__name__)


def _parse_float(text: str) -> float | None:
    try:
        return float(text)
    except ValueError:
        return None


def ingest_values(path: Path, log_returns: bool = False) -> np.ndarray:
    """Parse *path*: one numeric column, optionally preceded by a single header line.

    With *log_returns* the result is X_t = ln(p_t / p_{t-1}) and is one shorter
    than the input.  Blank lines are skipped; any other non-numeric row is a
    DataError carrying its line number.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")

    values: list[float] = []
    lines: list[int] = []
    with path.open(encoding="utf-8") as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.strip()
            if not line:
                continue
            fields = [c.strip() for c in line.split(",")]
            value = _parse_float(fields[0]) if len(fields) == 1 else None
            if value is None:
                if lineno == 1:
                    logger.debug("skipping header %r in %s", line, path.name)
                    continue
                raise DataError(f"expected one numeric value, got {line!r}", line=lineno)
            if not math.isfinite(value):
                raise DataError(f"value {line!r} is not finite", line=lineno)
            values.append(value)
            lines.append(lineno)

    arr = np.array(values, dtype=np.float64)
    if log_returns:
        bad = np.flatnonzero(arr <= 0.0)
        if bad.size:
            raise DataError(f"price {arr[bad[0]]!r} must be positive for log returns", line=lines[bad[0]])
        arr = np.diff(np.log(arr))
    logger.info("Read %d values from %s%s", arr.size, path.name, " (log returns)" if log_returns else "")
    return arr


def ingest_csv(path: Path, log_returns: bool = False) -> TimeSeries:
    """ingest_values wrapped in a TimeSeries labelled with the file stem."""
    arr = ingest_values(path, log_returns)
    try:
        return TimeSeries(arr, label=Path(path).stem)
    except InvalidInputError as exc:
        raise DataError(str(exc)) from exc
