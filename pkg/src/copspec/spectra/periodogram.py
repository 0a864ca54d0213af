"""Rank transform, clipped DFTs and the rank-based copula periodogram."""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike

from ..errors import InvalidInputError
from .schema import TimeSeries


def _as_values(series: TimeSeries | ArrayLike) -> np.ndarray:
    if isinstance(series, TimeSeries):
        return series.values
    arr = np.asarray(series, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("rank transform needs a non-empty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("rank transform input contains non-finite values")
    return arr


def rank_transform(series: TimeSeries | ArrayLike) -> np.ndarray:
    """Normalized ranks R_t / n with R_t = #{s : X_s <= X_t}.

    Ties share the largest rank of their group, so the maximum is always exactly 1.
    Example: [2, 1, 2] -> [1.0, 1/3, 1.0].
    """
    x = _as_values(series)
    counts = np.searchsorted(np.sort(x, kind="stable"), x, side="right")
    return counts / x.size


def clipped_indicators(ranks: np.ndarray, taus: ArrayLike) -> np.ndarray:
    """Rows 1{rank_t <= tau} as float64, shape (len(taus), n)."""
    taus = np.atleast_1d(np.asarray(taus, dtype=np.float64))
    return (np.asarray(ranks)[None, :] <= taus[:, None]).astype(np.float64)


def clipped_dft(ranks: np.ndarray, tau: float, n: int | None = None) -> np.ndarray:
    """d(s) = sum_t 1{rank_t <= tau} exp(-i 2 pi s t / n) for s = 0..n-1.

    ``d[0]`` equals the count of ranks at or below tau; for tau = 0 the whole
    transform is identically zero.
    """
    ranks = np.asarray(ranks, dtype=np.float64)
    if n is not None and n != ranks.size:
        raise InvalidInputError(f"n = {n} does not match {ranks.size} ranks")
    if not (0.0 <= tau <= 1.0):
        raise InvalidInputError(f"tau must lie in [0, 1], got {tau}")
    return np.fft.fft(clipped_indicators(ranks, [tau])[0])


def clipped_dfts(ranks: np.ndarray, taus: ArrayLike) -> np.ndarray:
    """Clipped DFTs for every level in *taus*, shape (len(taus), n)."""
    return np.fft.fft(clipped_indicators(ranks, taus), axis=1)


def copula_periodogram(d1: np.ndarray, d2: np.ndarray, n: int | None = None) -> np.ndarray:
    """I(s) = d1(s) * conj(d2(s)) / (2 pi n) for two clipped DFTs on the same grid.

    Hermitian: swapping the arguments conjugates the result.
    """
    d1 = np.asarray(d1, dtype=np.complex128)
    d2 = np.asarray(d2, dtype=np.complex128)
    if d1.shape != d2.shape or d1.ndim != 1:
        raise InvalidInputError(f"clipped DFT lengths differ: {d1.shape} vs {d2.shape}")
    if n is None:
        n = d1.size
    elif n != d1.size:
        raise InvalidInputError(f"n = {n} does not match DFT length {d1.size}")
    return d1 * np.conj(d2) / (2.0 * math.pi * n)
