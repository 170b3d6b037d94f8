"""Dense bounded-variable primal simplex with Bland's rule.

Solves ``max c.x  s.t.  A x <= b,  0 <= x <= u`` for ``b >= 0`` (the slack
basis is then feasible and no phase one is needed). Each iteration refactors
the basis from scratch, which is cheap for the small dense problems here and
keeps roundoff from accumulating across pivots.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

REDUCED_COST_TOL = 1e-11
PIVOT_TOL = 1e-12
RATIO_TIE_TOL = 1e-13


class SimplexError(RuntimeError):
    pass


@dataclass
class SimplexResult:
    x: np.ndarray
    objective: float
    duals: np.ndarray  # one per inequality row, >= 0 at optimum
    bound_duals: np.ndarray  # one per upper bound, >= 0 at optimum
    iterations: int
    basis: list

    def residuals(self, c, A, b, upper) -> dict:
        """Primal feasibility, dual feasibility, complementary slackness and gap."""
        c, A, b, upper = map(np.asarray, (c, A, b, upper))
        x, y, w = self.x, self.duals, self.bound_duals
        slack = b - A @ x
        finite = np.isfinite(upper)
        ub_gap = np.where(finite, upper - x, 0.0)
        reduced = A.T @ y + w - c
        primal = max(0.0, float(np.max(-slack, initial=0.0)), float(np.max(-x, initial=0.0)),
                     float(np.max(-ub_gap, initial=0.0)))
        dual = max(0.0, float(np.max(-y, initial=0.0)), float(np.max(-w, initial=0.0)),
                   float(np.max(-reduced, initial=0.0)))
        comp = max(float(np.max(np.abs(y * slack), initial=0.0)),
                   float(np.max(np.abs(w * ub_gap), initial=0.0)),
                   float(np.max(np.abs(x * reduced), initial=0.0)))
        gap = float(b @ y + np.where(finite, upper, 0.0) @ w - c @ x)
        return {"primal": primal, "dual": dual, "complementary": comp, "gap": abs(gap)}


def solve(c, A, b, upper=None, max_iter: int | None = None) -> SimplexResult:
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ValueError("inconsistent problem dimensions")
    if np.any(b < 0):
        raise ValueError("right-hand side must be non-negative (slack basis start)")
    upper = np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float)
    if np.any(upper < 0):
        raise ValueError("upper bounds must be non-negative")
    if max_iter is None:
        max_iter = 50 * (n + m) + 100

    full = np.hstack([A, np.eye(m)])
    cost = np.concatenate([c, np.zeros(m)])
    ub = np.concatenate([upper, np.full(m, np.inf)])
    total = n + m
    basis = list(range(n, total))
    at_upper = np.zeros(total, dtype=bool)

    for it in range(max_iter):
        in_basis = np.zeros(total, dtype=bool)
        in_basis[basis] = True
        B = full[:, basis]
        x_all = np.where(at_upper, ub, 0.0)
        x_all[in_basis] = 0.0
        xb = np.linalg.solve(B, b - full @ x_all)
        y = np.linalg.solve(B.T, cost[basis])
        d = cost - full.T @ y

        enter, sigma = None, 0
        for j in range(total):
            if in_basis[j]:
                continue
            if not at_upper[j] and d[j] > REDUCED_COST_TOL and ub[j] > 0:
                enter, sigma = j, 1
                break
            if at_upper[j] and d[j] < -REDUCED_COST_TOL:
                enter, sigma = j, -1
                break
        if enter is None:
            x_all[basis] = xb
            x = np.clip(x_all[:n], 0.0, upper)
            w = np.where(at_upper[:n], np.maximum(d[:n], 0.0), 0.0)
            return SimplexResult(x, float(c @ x), np.maximum(y, 0.0), w, it, list(basis))

        col = np.linalg.solve(B, full[:, enter])
        theta = ub[enter]
        leave, leave_var, to_upper = None, enter, False
        for i, var in enumerate(basis):
            rate = -sigma * col[i]
            if rate < -PIVOT_TOL:
                lim, up = max(xb[i], 0.0) / -rate, False
            elif rate > PIVOT_TOL and np.isfinite(ub[var]):
                lim, up = max(ub[var] - xb[i], 0.0) / rate, True
            else:
                continue
            if lim < theta - RATIO_TIE_TOL or (lim <= theta + RATIO_TIE_TOL and var < leave_var):
                theta, leave, leave_var, to_upper = lim, i, var, up
        if not np.isfinite(theta):
            raise SimplexError("problem is unbounded")
        if leave is None:
            at_upper[enter] = not at_upper[enter]
        else:
            at_upper[basis[leave]] = to_upper
            basis[leave] = enter
            at_upper[enter] = False
    raise SimplexError(f"no convergence after {max_iter} iterations")
