"""Bounded-variable revised simplex for small dense LPs.

Solves::

    minimize c^T x  subject to  M x = b,  lb <= x <= ub

starting from a caller-supplied feasible basis.  Nonbasic variables may sit
anywhere inside their bounds (not only at a bound), which lets callers start
from an interior point such as ``x = 0`` without a phase one.  The basis
inverse is kept explicitly, updated by elementary row operations and
refactorized periodically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ErspudError

PIVOT_TOL = 1e-10
FEAS_TOL = 1e-9
OPT_TOL = 1e-9


class SimplexError(ErspudError):
    """Iteration limit reached or the problem turned out unbounded."""


@dataclass
class SimplexResult:
    x: np.ndarray
    basis: np.ndarray
    duals: np.ndarray
    objective: float
    iterations: int
    bland_engaged: bool


def bounded_simplex(
    M,
    b,
    c,
    lb,
    ub,
    basis,
    x0,
    *,
    bland_after: int | None = None,
    max_iter: int | None = None,
    refactor_every: int = 50,
) -> SimplexResult:
    """Run primal simplex from the feasible point ``x0`` with basis ``basis``.

    ``x0`` supplies the nonbasic values; basic values are recomputed from the
    equality constraints and must then satisfy their bounds.  Pricing is
    Dantzig's rule until ``bland_after`` basis changes, then Bland's smallest
    index rule, which cannot cycle.
    """
    M = np.asarray(M, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    lb = np.asarray(lb, dtype=np.float64)
    ub = np.asarray(ub, dtype=np.float64)
    m, N = M.shape
    basis = np.array(basis, dtype=np.int64)
    x = np.array(x0, dtype=np.float64)
    if bland_after is None:
        bland_after = 10 * N
    if max_iter is None:
        max_iter = 50 * N + 1000

    is_basic = np.zeros(N, dtype=bool)
    is_basic[basis] = True

    def refactor():
        binv = np.linalg.inv(M[:, basis])
        xn = np.where(is_basic, 0.0, x)
        x[basis] = binv @ (b - M @ xn)
        return binv

    binv = refactor()
    if np.any(x[basis] < lb[basis] - 1e-7) or np.any(x[basis] > ub[basis] + 1e-7):
        raise SimplexError("starting basis is infeasible")

    it = 0
    pivots = 0
    since_refactor = 0
    bland = False
    need_pricing = True
    while True:
        if since_refactor >= refactor_every:
            binv = refactor()
            since_refactor = 0
            need_pricing = True
        if need_pricing:
            duals = c[basis] @ binv
            d = c - duals @ M
            d[is_basic] = 0.0
            need_pricing = False
        up = (d < -OPT_TOL) & (x < ub - FEAS_TOL)
        down = (d > OPT_TOL) & (x > lb + FEAS_TOL)
        cand = (up | down) & ~is_basic
        if not cand.any():
            break
        if it >= max_iter:
            raise SimplexError(f"no convergence after {it} iterations")
        if not bland and pivots >= bland_after:
            bland = True
        if bland:
            q = int(np.flatnonzero(cand)[0])
        else:
            q = int(np.argmax(np.where(cand, np.abs(d), -1.0)))
        direction = 1.0 if up[q] else -1.0

        alpha = binv @ M[:, q]
        delta = direction * alpha  # x_B(t) = x_B - t * delta
        xb = x[basis]
        ratios = np.full(m, np.inf)
        dec = delta > PIVOT_TOL
        inc = delta < -PIVOT_TOL
        ratios[dec] = (xb[dec] - lb[basis][dec]) / delta[dec]
        ratios[inc] = (ub[basis][inc] - xb[inc]) / (-delta[inc])
        np.maximum(ratios, 0.0, out=ratios)
        own = ub[q] - x[q] if direction > 0 else x[q] - lb[q]
        t_basis = ratios.min() if m else np.inf
        t = min(t_basis, own)
        if not np.isfinite(t):
            raise SimplexError("problem is unbounded")

        it += 1
        if own <= t_basis:
            # bound flip: basis and reduced costs are unchanged
            x[q] += direction * own
            x[basis] = xb - own * delta
            continue

        ties = np.flatnonzero(ratios <= t_basis + 1e-12)
        if bland:
            r = int(ties[np.argmin(basis[ties])])
        else:
            r = int(ties[np.argmax(np.abs(delta[ties]))])
        leaving = basis[r]
        x[basis] = xb - t * delta
        x[q] += direction * t
        x[leaving] = lb[leaving] if delta[r] > 0 else ub[leaving]

        piv = alpha[r]
        row = binv[r] / piv
        binv -= np.outer(alpha, row)
        binv[r] = row
        basis[r] = q
        is_basic[leaving] = False
        is_basic[q] = True
        need_pricing = True
        pivots += 1
        since_refactor += 1

    binv = refactor()
    duals = c[basis] @ binv
    return SimplexResult(
        x=x,
        basis=basis,
        duals=duals,
        objective=float(c @ x),
        iterations=it,
        bland_engaged=bland,
    )
