"""Derivative-free Nelder-Mead minimizer shared by the CSS and QMLE fits."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError

logger = logging.getLogger(__name__)

# Reflection, expansion, contraction and shrink coefficients
_REFLECT, _EXPAND, _CONTRACT, _SHRINK = 1.0, 2.0, 0.5, 0.5
# Initial simplex offsets: relative step for nonzero coordinates, absolute step for zeros
_REL_STEP, _ZERO_STEP = 0.05, 0.00025


@dataclass
class NelderMeadResult:
    x: np.ndarray
    fun: float
    iterations: int
    converged: bool
    best_history: list[float] = field(default_factory=list)  # best vertex value after each iteration


def _diameter(simplex: np.ndarray) -> float:
    diffs = simplex[:, None, :] - simplex[None, :, :]
    return float(np.sqrt((diffs * diffs).sum(axis=-1)).max())


def nelder_mead(
    objective: Callable[[np.ndarray], float],
    start: np.ndarray | list[float],
    tol: float = 1e-8,
    max_iter: int = 2000,
) -> NelderMeadResult:
    """Minimize *objective* from *start*.

    Terminates when the simplex diameter (largest vertex distance) drops below
    *tol* or after *max_iter* iterations.  Non-finite objective values away from
    the start are treated as +inf, so the simplex simply moves away from them.
    """
    x0 = np.asarray(start, dtype=np.float64).ravel()
    d = x0.size

    def f(x: np.ndarray) -> float:
        value = float(objective(x))
        return value if math.isfinite(value) else math.inf

    f0 = float(objective(x0))
    if not math.isfinite(f0):
        raise InvalidInputError(f"objective is not finite at the start point {x0.tolist()}")

    simplex = np.empty((d + 1, d))
    simplex[0] = x0
    for i in range(d):
        vertex = x0.copy()
        vertex[i] = vertex[i] * (1.0 + _REL_STEP) if vertex[i] != 0.0 else _ZERO_STEP
        simplex[i + 1] = vertex
    values = np.array([f0] + [f(v) for v in simplex[1:]])

    history: list[float] = []
    iterations = 0
    converged = False
    while True:
        order = np.argsort(values, kind="stable")
        simplex, values = simplex[order], values[order]
        if _diameter(simplex) < tol:
            converged = True
            break
        if iterations >= max_iter:
            break
        iterations += 1

        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = centroid + _REFLECT * (centroid - worst)
        fr = f(xr)
        if values[0] <= fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        elif fr < values[0]:
            xe = centroid + _EXPAND * (xr - centroid)
            fe = f(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = centroid + _CONTRACT * (xr - centroid)  # outside
                fc = f(xc)
                accept = fc <= fr
            else:
                xc = centroid + _CONTRACT * (worst - centroid)  # inside
                fc = f(xc)
                accept = fc < values[-1]
            if accept:
                simplex[-1], values[-1] = xc, fc
            else:
                best = simplex[0]
                simplex[1:] = best + _SHRINK * (simplex[1:] - best)
                values[1:] = [f(v) for v in simplex[1:]]
        history.append(float(values.min()))

    if not converged:
        logger.debug("Nelder-Mead hit the iteration cap (%d) at f=%.10g", max_iter, values[0])
    return NelderMeadResult(
        x=simplex[0].copy(),
        fun=float(values[0]),
        iterations=iterations,
        converged=converged,
        best_history=history,
    )
