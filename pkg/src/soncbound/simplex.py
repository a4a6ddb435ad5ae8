"""Dense two-phase simplex solver for small equality-form LPs.

Solves   max c.x   s.t.  A x = b,  x >= 0   and returns a basic optimal
solution (at most one nonzero per equality row).  Bland's rule is used
for both pivot choices, so the method is deterministic and cannot cycle.
Intended for desk-scale systems; everything is dense numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-9
PIVOT_TOL = 1e-11
MAX_PIVOTS = 20000

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NUMERICAL_ERROR = "numerical-error"


@dataclass(frozen=True)
class LpProblem:
    """max objective . x  subject to  eq_matrix x = eq_rhs, x >= 0."""

    eq_matrix: np.ndarray
    eq_rhs: np.ndarray
    objective: np.ndarray

    def __post_init__(self):
        m, n = self.eq_matrix.shape
        if self.eq_rhs.shape != (m,) or self.objective.shape != (n,):
            raise ValueError("inconsistent LP dimensions")


@dataclass(frozen=True)
class LpResult:
    status: str
    x: np.ndarray | None = None
    objective_value: float | None = None
    iterations: int = 0


def _pivot(tableau: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tableau[row] /= tableau[row, col]
    for r in range(tableau.shape[0]):
        if r != row and abs(tableau[r, col]) > PIVOT_TOL:
            tableau[r] -= tableau[r, col] * tableau[row]
    basis[row] = col


def _bland_iterate(tableau: np.ndarray, basis: list[int], ncols: int, budget: int) -> tuple[str, int]:
    """Run simplex pivots on a tableau whose last row is the (min) objective."""
    used = 0
    while True:
        obj = tableau[-1, :ncols]
        entering = -1
        for j in range(ncols):
            if obj[j] < -FEAS_TOL:
                entering = j
                break
        if entering < 0:
            return OPTIMAL, used
        leaving = -1
        best_ratio = np.inf
        for r in range(tableau.shape[0] - 1):
            a = tableau[r, entering]
            if a > PIVOT_TOL:
                ratio = tableau[r, -1] / a
                # Bland tie-break: smallest basis index leaves.
                if ratio < best_ratio - PIVOT_TOL or (
                    abs(ratio - best_ratio) <= PIVOT_TOL
                    and leaving >= 0
                    and basis[r] < basis[leaving]
                ):
                    best_ratio = ratio
                    leaving = r
        if leaving < 0:
            return UNBOUNDED, used
        _pivot(tableau, basis, leaving, entering)
        used += 1
        if used > budget:
            return NUMERICAL_ERROR, used


def lp_solve(problem: LpProblem) -> LpResult:
    """Two-phase dense simplex with Bland's rule.

    Returns a basic solution: at most eq_matrix.shape[0] entries of x
    are nonzero when the status is optimal.
    """
    A = np.array(problem.eq_matrix, dtype=float)
    b = np.array(problem.eq_rhs, dtype=float)
    c = np.array(problem.objective, dtype=float)
    m, n = A.shape

    # Normalize to b >= 0 so artificials give a feasible phase-1 start.
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # Phase 1: minimize the sum of artificial variables.
    tableau = np.zeros((m + 1, n + m + 1))
    tableau[:m, :n] = A
    tableau[:m, n : n + m] = np.eye(m)
    tableau[:m, -1] = b
    tableau[-1, n : n + m] = 1.0
    basis = list(range(n, n + m))
    # Price out the artificial basis.
    tableau[-1] -= tableau[:m].sum(axis=0)

    status, it1 = _bland_iterate(tableau, basis, n + m, MAX_PIVOTS)
    if status == NUMERICAL_ERROR:
        return LpResult(NUMERICAL_ERROR, iterations=it1)
    if -tableau[-1, -1] > FEAS_TOL:
        return LpResult(INFEASIBLE, iterations=it1)

    # Drive any leftover artificial out of the basis (or drop its row).
    keep_rows = []
    for r in range(m):
        if basis[r] >= n:
            pivot_col = -1
            for j in range(n):
                if abs(tableau[r, j]) > 1e-8:
                    pivot_col = j
                    break
            if pivot_col >= 0:
                _pivot(tableau, basis, r, pivot_col)
                keep_rows.append(r)
            # else: redundant constraint row, dropped below
            elif abs(tableau[r, -1]) > FEAS_TOL:
                return LpResult(INFEASIBLE, iterations=it1)
        else:
            keep_rows.append(r)

    rows = [r for r in range(m) if r in set(keep_rows) or basis[r] < n]
    work = np.zeros((len(rows) + 1, n + 1))
    work[:-1, :n] = tableau[rows][:, :n]
    work[:-1, -1] = tableau[rows][:, -1]
    basis = [basis[r] for r in rows]

    # Phase 2: maximize c.x == minimize (-c).x
    work[-1, :n] = -c
    for r, bv in enumerate(basis):
        coef = work[-1, bv]
        if abs(coef) > PIVOT_TOL:
            work[-1] -= coef * work[r]

    status, it2 = _bland_iterate(work, basis, n, MAX_PIVOTS)
    if status == NUMERICAL_ERROR:
        return LpResult(NUMERICAL_ERROR, iterations=it1 + it2)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED, iterations=it1 + it2)

    x = np.zeros(n)
    for r, bv in enumerate(basis):
        x[bv] = work[r, -1]
    x[np.abs(x) < PIVOT_TOL] = 0.0
    return LpResult(OPTIMAL, x=x, objective_value=float(c @ x), iterations=it1 + it2)
