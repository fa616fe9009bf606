"""Multi-start Nelder-Mead with a polishing loop.

Each start is run with :func:`scipy.optimize.minimize` (``method="Nelder-Mead"``)
from an explicit axis-aligned initial simplex. The best start is then
restarted from its own optimum until a restart no longer improves the
objective by more than ``ftol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize


@dataclass
class OptimResult:
    x: np.ndarray
    fun: float
    converged: bool
    n_starts: int
    n_evals: int


def _simplex(x0: np.ndarray, step: float) -> np.ndarray:
    sim = np.tile(x0, (len(x0) + 1, 1))
    for i in range(len(x0)):
        sim[i + 1, i] += step
    return sim


def nelder_mead(fun: Callable, x0, *, ftol: float, xtol: float, max_iter: int, step: float):
    x0 = np.asarray(x0, dtype=float)
    res = minimize(
        fun,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": _simplex(x0, step),
            "xatol": xtol,
            "fatol": ftol,
            "maxiter": max_iter,
            "maxfev": 4 * max_iter,
        },
    )
    return np.asarray(res.x, dtype=float), float(res.fun), bool(res.success), int(res.nfev)


def multistart_minimize(
    fun: Callable,
    starts: Sequence,
    *,
    ftol: float,
    xtol: float,
    max_iter: int,
    step: float,
    polish_rounds: int = 10,
) -> OptimResult:
    """Minimize ``fun`` from every finite start and polish the winner.

    Ties between starts go to the lower start index, so the result does not
    depend on evaluation order.
    """
    best = None
    n_evals = 0
    n_starts = 0
    for x0 in starts:
        x0 = np.asarray(x0, dtype=float)
        if not math.isfinite(fun(x0)):
            continue
        n_starts += 1
        x, f, ok, nfev = nelder_mead(fun, x0, ftol=ftol, xtol=xtol, max_iter=max_iter, step=step)
        n_evals += nfev
        if best is None or f < best[1]:
            best = (x, f, ok)
    if best is None:
        return OptimResult(np.asarray(starts[0], dtype=float), math.inf, False, 0, n_evals)

    x_best, f_best, ok_best = best
    # Return the last point whose restart failed to improve by more than ftol:
    # re-running from it reproduces that certificate exactly.
    for _ in range(polish_rounds):
        x, f, ok, nfev = nelder_mead(fun, x_best, ftol=ftol, xtol=xtol, max_iter=max_iter, step=step)
        n_evals += nfev
        if f < f_best - ftol:
            x_best, f_best, ok_best = x, f, ok
        else:
            ok_best = ok_best and ok
            break
    else:
        ok_best = False
    return OptimResult(x_best, f_best, ok_best, n_starts, n_evals)
