"""
Dense phase-1 simplex for the feasibility problem A x = b, x >= 0.

One artificial variable per row; the phase-1 objective is their sum. Bland's
rule picks the lowest-index entering column and, among tied ratios, the row
whose basic variable has the lowest index, so the method always terminates.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config.settings import settings
from .exceptions import NumericalFailure

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-11
MAX_ITERATIONS = 50_000


@dataclass(frozen=True, eq=False)
class SimplexResult:
    """
    x is the basic solution over the original columns. dual is the row vector y
    of the final basis, satisfying A^T y <= 0 and b.y = infeasibility.
    """

    feasible: bool
    x: np.ndarray
    infeasibility: float
    dual: np.ndarray
    iterations: int


def _pivot_col(T: np.ndarray, tol: float) -> Tuple[bool, int]:
    candidates = np.flatnonzero(T[-1, :-1] < -tol)
    if candidates.size == 0:
        return False, -1
    return True, int(candidates[0])


def _pivot_row(T: np.ndarray, basis: np.ndarray, pivcol: int) -> Tuple[bool, int]:
    column = T[:-1, pivcol]
    rows = np.flatnonzero(column > PIVOT_TOL)
    if rows.size == 0:
        return False, -1
    ratios = T[rows, -1] / column[rows]
    best = ratios.min()
    tied = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
    return True, int(tied[np.argmin(basis[tied])])


def _apply_pivot(T: np.ndarray, basis: np.ndarray, pivrow: int, pivcol: int):
    basis[pivrow] = pivcol
    T[pivrow] /= T[pivrow, pivcol]
    for irow in range(T.shape[0]):
        if irow != pivrow and T[irow, pivcol] != 0:
            T[irow] -= T[irow, pivcol] * T[pivrow]


def phase_one(a: np.ndarray, b: np.ndarray, tol: Optional[float] = None) -> SimplexResult:
    """Minimize the total artificial mass; feasible iff it reaches zero within tol."""
    tol = settings.LP_TOL if tol is None else tol
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    m, n = a.shape

    signs = np.where(b < 0, -1.0, 1.0)
    a *= signs[:, None]
    b *= signs

    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = a
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -a.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = np.arange(n, n + m)

    iterations = 0
    while True:
        found, pivcol = _pivot_col(T, tol)
        if not found:
            break
        found, pivrow = _pivot_row(T, basis, pivcol)
        if not found:
            raise NumericalFailure("Phase-1 problem reported unbounded, which cannot happen")
        _apply_pivot(T, basis, pivrow, pivcol)
        iterations += 1
        if iterations >= MAX_ITERATIONS:
            raise NumericalFailure(f"Simplex did not terminate in {MAX_ITERATIONS} pivots")

    x = np.zeros(n + m)
    x[basis] = T[:m, -1]
    infeasibility = float(-T[-1, -1])
    dual = (1.0 - T[-1, n : n + m]) * signs
    logger.debug(
        f"Phase-1 simplex: {iterations} pivots, residual artificial mass {infeasibility:.3e}"
    )
    return SimplexResult(
        feasible=infeasibility <= tol,
        x=np.clip(x[:n], 0.0, None),
        infeasibility=infeasibility,
        dual=dual,
        iterations=iterations,
    )
