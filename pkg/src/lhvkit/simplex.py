"""Dense two-phase simplex for small standard-form linear programs.

Solves ``minimize c @ x  subject to  A @ x == b,  x >= 0`` on a full tableau
with Bland's rule (smallest eligible index enters, smallest basic index leaves
among ratio ties), which cannot cycle.  Problems here have at most a few
hundred columns, so no sparse or revised machinery is used.

Besides the primal solution the solver returns

* ``dual``: multipliers ``y`` with ``A.T @ y <= c`` and ``b @ y == objective``
  at optimality;
* ``farkas``: when the constraints are infeasible, a vector ``y`` with
  ``A.T @ y <= 0`` and ``b @ y > 0`` read off the phase-1 optimum.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_COLUMNS = 10 ** 6


class LPNumericError(RuntimeError):
    """The solver lost accuracy or ran out of iterations; not an infeasibility verdict."""


class LPSizeError(ValueError):
    pass


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    objective: float | None
    dual: np.ndarray | None
    farkas: np.ndarray | None
    phase1_residual: float
    iterations: int


class _Tableau:
    def __init__(self, A, b, pivot_tol):
        m, n = A.shape
        self.n = n
        self.sign = np.where(b < 0, -1.0, 1.0)
        self.T = np.hstack([A * self.sign[:, None], np.eye(m)])
        self.rhs = b * self.sign
        self.basis = list(range(n, n + m))
        self.pivot_tol = pivot_tol
        self.iterations = 0

    def pivot(self, i, j):
        T, rhs = self.T, self.rhs
        piv = T[i, j]
        T[i] /= piv
        rhs[i] /= piv
        col = T[:, j].copy()
        col[i] = 0.0
        T -= np.outer(col, T[i])
        rhs -= col * rhs[i]
        T[:, j] = 0.0
        T[i, j] = 1.0
        self.basis[i] = j
        self.iterations += 1

    def multipliers(self, cost):
        """``c_B @ B^-1`` in the sign-flipped row space."""
        return cost[self.basis] @ self.T[:, self.n:]

    def run(self, cost, allowed, opt_tol, max_iter):
        while True:
            if self.iterations >= max_iter:
                raise LPNumericError(f"no convergence after {max_iter} pivots")
            reduced = cost - cost[self.basis] @ self.T
            eligible = np.flatnonzero(allowed & (reduced < -opt_tol))
            if eligible.size == 0:
                return "optimal"
            j = int(eligible[0])
            col = self.T[:, j]
            rows = np.flatnonzero(col > self.pivot_tol)
            if rows.size == 0:
                return "unbounded"
            ratios = np.maximum(self.rhs[rows], 0.0) / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * max(1.0, best)]
            i = min(ties, key=lambda r: self.basis[r])
            self.pivot(int(i), j)

    def drive_out_artificials(self):
        """Pivot zero-level artificials out of the basis; drop rows that are redundant."""
        i = 0
        while i < len(self.basis):
            if self.basis[i] >= self.n:
                row = self.T[i, :self.n]
                candidates = np.flatnonzero(np.abs(row) > self.pivot_tol)
                if candidates.size:
                    j = candidates[np.argmax(np.abs(row[candidates]))]
                    self.pivot(i, int(j))
                    np.maximum(self.rhs, 0.0, out=self.rhs)
                else:
                    self.T = np.delete(self.T, i, axis=0)
                    self.rhs = np.delete(self.rhs, i)
                    del self.basis[i]
                    continue
            i += 1


def solve_lp(c, A, b, feas_tol: float = 1e-9, opt_tol: float = 1e-11,
             pivot_tol: float = 1e-11, max_iter: int = 100_000) -> LPResult:
    """Minimize ``c @ x`` over ``A @ x == b, x >= 0``.

    ``feas_tol`` bounds the phase-1 residual (sum of artificial variables)
    accepted as feasible; every constraint is then met within ``feas_tol``.
    """
    A = np.array(A, dtype=float, ndmin=2)
    b = np.array(b, dtype=float).ravel()
    c = np.array(c, dtype=float).ravel()
    m, n = A.shape
    if n > MAX_COLUMNS:
        raise LPSizeError(f"{n} variables exceeds the limit {MAX_COLUMNS}")
    if b.shape != (m,) or c.shape != (n,):
        raise ValueError("inconsistent LP dimensions")
    if not (np.isfinite(A).all() and np.isfinite(b).all() and np.isfinite(c).all()):
        raise ValueError("LP data must be finite")

    tab = _Tableau(A, b, pivot_tol)
    cost1 = np.concatenate([np.zeros(n), np.ones(m)])
    tab.run(cost1, np.ones(n + m, dtype=bool), opt_tol, max_iter)
    residual = float(cost1[tab.basis] @ tab.rhs)
    if residual > feas_tol:
        farkas = tab.multipliers(cost1) * tab.sign
        return LPResult("infeasible", None, None, None, farkas, residual, tab.iterations)

    tab.drive_out_artificials()
    cost2 = np.concatenate([c, np.zeros(m)])
    allowed = np.zeros(n + m, dtype=bool)
    allowed[:n] = True
    status = tab.run(cost2, allowed, opt_tol, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, None, None, None, residual, tab.iterations)

    x = np.zeros(n)
    x[tab.basis] = np.maximum(tab.rhs, 0.0)
    scale = max(1.0, float(np.abs(b).max(initial=0.0)))
    if np.abs(A @ x - b).max(initial=0.0) > 1e3 * max(feas_tol, 1e-12) * scale:
        raise LPNumericError("solution residual too large; tableau lost accuracy")
    dual = tab.multipliers(cost2) * tab.sign
    return LPResult("optimal", x, float(c @ x), dual, None, residual, tab.iterations)
