"""
ratcheb - Simplex Module

A small dense two-phase simplex method for linear programs in standard
equality form

    maximize c.x  subject to  A x = b,  x >= 0.

It backs the grid linear-programming oracle of the solver and is sized for
desk-scale problems (a few dozen rows, a few thousand columns).
"""

import logging
from typing import List, Optional

import numpy as np

from .errors import IntegrityError

logger = logging.getLogger(__name__)


class InfeasibleError(IntegrityError):
    """Raised when phase one ends with positive artificial mass."""


class UnboundedError(IntegrityError):
    """Raised when an entering column has no positive pivot entry."""


class SimplexResult:
    """
    Outcome of a simplex run.

    Attributes:
        x (numpy.ndarray): Optimal primal vector.
        objective (float): c.x at the optimum.
        duals (numpy.ndarray): Optimal multipliers y of the equality rows (A^T y >= c, b.y = objective).
        basis (list): Indices of the basic columns (artificials are numbered after the structural columns).
        iterations (int): Pivots performed over both phases.
    """

    def __init__(self, x: np.ndarray, objective: float, duals: np.ndarray, basis: List[int],
                 iterations: int):
        self.x = x
        self.objective = objective
        self.duals = duals
        self.basis = basis
        self.iterations = iterations

    def __repr__(self) -> str:
        return f"SimplexResult(objective={self.objective!r}, iterations={self.iterations})"


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= np.outer(factors, T[row])


def _pivot_col(reduced: np.ndarray, allowed: np.ndarray, tol: float, bland: bool) -> int:
    candidates = np.flatnonzero(allowed & (reduced < -tol))
    if candidates.size == 0:
        return -1
    if bland:
        return int(candidates[0])
    return int(candidates[np.argmin(reduced[candidates])])


def _pivot_row(T: np.ndarray, col: int, basis: List[int], tol: float) -> int:
    column = T[:-1, col]
    rows = np.flatnonzero(column > tol)
    if rows.size == 0:
        return -1
    ratios = T[rows, -1] / column[rows]
    best = ratios.min()
    ties = rows[ratios <= best + tol * max(1.0, abs(best))]
    # smallest basic index among ties keeps Bland's rule cycle free
    return int(min(ties, key=lambda r: basis[r]))


def _run(T: np.ndarray, basis: List[int], cost: np.ndarray, allowed: np.ndarray,
         tol: float, max_iterations: int, phase: int) -> int:
    m = T.shape[0] - 1
    iterations = 0
    degenerate = 0
    while True:
        reduced = cost[basis] @ T[:m, :-1] - cost
        col = _pivot_col(reduced, allowed, tol, bland=degenerate > 20)
        if col < 0:
            return iterations
        row = _pivot_row(T, col, basis, tol)
        if row < 0:
            raise UnboundedError(f"phase {phase}: column {col} is unbounded")
        degenerate = degenerate + 1 if T[row, -1] <= tol else 0
        _pivot(T, row, col)
        basis[row] = col
        iterations += 1
        if iterations >= max_iterations:
            raise IntegrityError(f"phase {phase}: simplex exceeded {max_iterations} pivots")


def linprog_max(c, A_eq, b_eq, tol: float = 1e-10,
                max_iterations: Optional[int] = None) -> SimplexResult:
    """
    Solves max c.x subject to A_eq x = b_eq, x >= 0.

    Args:
        c: Objective coefficients (length N).
        A_eq: Constraint matrix (M x N).
        b_eq: Right-hand side (length M).
        tol (float): Pivot and optimality tolerance.
        max_iterations (int): Pivot cap per phase (default 50 * (M + N)).

    Returns:
        SimplexResult: Primal solution, objective and dual multipliers.

    Raises:
        InfeasibleError: If the constraints admit no non-negative solution.
        UnboundedError: If the objective is unbounded above.

    Examples:
        >>> res = linprog_max([1.0, 1.0], [[1.0, 2.0]], [4.0])
        >>> res.objective
        4.0
    """
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A_eq, dtype=float)).copy()
    b = np.asarray(b_eq, dtype=float).copy()
    m, n = A.shape
    signs = np.where(b < 0, -1.0, 1.0)
    A *= signs[:, None]
    b *= signs
    if max_iterations is None:
        max_iterations = 50 * (m + n)

    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(n, n + m))

    phase_one = np.zeros(n + m)
    phase_one[n:] = -1.0
    everything = np.ones(n + m, dtype=bool)
    iterations = _run(T, basis, phase_one, everything, tol, max_iterations, phase=1)
    artificial_mass = float(sum(T[r, -1] for r, j in enumerate(basis) if j >= n))
    if artificial_mass > tol * max(1.0, float(np.max(np.abs(b)))):
        raise InfeasibleError(f"linear program is infeasible (artificial mass {artificial_mass:.3e})")

    for r, j in enumerate(basis):
        if j < n:
            continue
        nonzero = np.flatnonzero(np.abs(T[r, :n]) > tol)
        if nonzero.size:
            _pivot(T, r, int(nonzero[0]))
            basis[r] = int(nonzero[0])

    cost = np.zeros(n + m)
    cost[:n] = c
    structural = np.zeros(n + m, dtype=bool)
    structural[:n] = True
    iterations += _run(T, basis, cost, structural, tol, max_iterations, phase=2)

    x_full = np.zeros(n + m)
    x_full[basis] = T[:m, -1]
    extended = np.hstack([A, np.eye(m)])
    try:
        y_signed = np.linalg.solve(extended[:, basis].T, cost[basis])
    except np.linalg.LinAlgError as exc:
        raise IntegrityError("singular optimal basis") from exc
    result = SimplexResult(x_full[:n], float(c @ x_full[:n]), y_signed * signs, basis, iterations)
    logger.debug("simplex finished: %r", result)
    return result
