"""The l1 row-recovery linear program.

For data ``Y`` (n x p) and a constraint vector ``r`` we solve::

    minimize ||w^T Y||_1  subject to  r^T w = 1.

Rather than carrying the 2p slack inequalities of the primal, the solver works
on the LP dual::

    maximize lam  subject to  Y u = lam r,  -1 <= u <= 1,

which has only n equality rows and p box-bounded variables.  The simplex
multipliers of the dual's optimal basis are an optimal primal vertex ``w``:
every basic ``u_j`` pins ``s_j = w^T Y e_j`` to zero, so the zero pattern of
``s`` is exact up to rounding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .densela import as_mat
from .errors import ConfigError, DimensionError, InputError
from .simplex import bounded_simplex

PROJ_INFEASIBLE_TOL = 1e-10


@dataclass
class RowRecoveryProblem:
    Y: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        self.Y = as_mat(self.Y)
        self.r = np.asarray(self.r, dtype=np.float64).ravel()
        if self.r.shape[0] != self.Y.shape[0]:
            raise DimensionError(
                f"constraint vector has length {self.r.shape[0]}, Y has {self.Y.shape[0]} rows"
            )
        if not (np.all(np.isfinite(self.Y)) and np.all(np.isfinite(self.r))):
            raise InputError("Y and r must be finite")


@dataclass
class RowRecoverySolution:
    w: np.ndarray
    s: np.ndarray
    objective: float
    status: str
    iterations: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _infeasible(n, p):
    return RowRecoverySolution(
        w=np.zeros(n), s=np.zeros(p), objective=float("inf"), status="infeasible"
    )


def solve_row_recovery(prob: RowRecoveryProblem) -> RowRecoverySolution:
    """Minimize ``||w^T Y||_1`` subject to ``r^T w = 1``.

    Returns an optimal vertex; ``status`` is ``"infeasible"`` only when ``r``
    is zero.  The objective is bounded below by zero so there is no unbounded
    case.
    """
    Y, r = prob.Y, prob.r
    n, p = Y.shape
    r_scale = np.max(np.abs(r)) if n else 0.0
    if r_scale == 0.0:
        return _infeasible(n, p)
    y_scale = np.max(np.abs(Y))
    if y_scale == 0.0:
        # every feasible w gives s = 0
        w = r / np.dot(r, r)
        return RowRecoverySolution(w=w, s=np.zeros(p), objective=0.0, status="optimal")

    Ys = Y / y_scale
    rs = r / r_scale
    # columns: u_1..u_p, lam, artificial_1..artificial_n
    M = np.hstack([Ys, -rs[:, None], np.eye(n)])
    c = np.zeros(p + 1 + n)
    c[p] = -1.0
    lb = np.concatenate([-np.ones(p), [-np.inf], np.zeros(n)])
    ub = np.concatenate([np.ones(p), [np.inf], np.zeros(n)])
    basis = np.arange(p + 1, p + 1 + n)
    res = bounded_simplex(
        M, np.zeros(n), c, lb, ub, basis, np.zeros(p + 1 + n),
        bland_after=10 * (n + p),
    )
    # duals solve B^T pi = c_B; pi is the optimal w of the scaled primal
    w = res.duals / r_scale
    w = w / np.dot(r, w)
    s = Y.T @ w
    return RowRecoverySolution(
        w=w,
        s=s,
        objective=float(np.sum(np.abs(s))),
        status="optimal",
        iterations=res.iterations,
        extra={"dual_objective": -res.objective * y_scale / r_scale, "bland": res.bland_engaged},
    )


def projector_complement(basis, n: int) -> np.ndarray:
    """``I - sum u u^T`` over an orthonormal list ``basis`` of R^n vectors."""
    P = np.eye(n)
    for u in basis:
        u = np.asarray(u, dtype=np.float64)
        P -= np.outer(u, u)
    return P


def solve_projected_row_recovery(Y, r, basis) -> RowRecoverySolution:
    """Row recovery with constraint ``(P r)^T w = 1``, ``P`` projecting onto
    the orthogonal complement of ``span(basis)``."""
    prob = RowRecoveryProblem(Y, r)
    n = prob.Y.shape[0]
    r_proj = projector_complement(basis, n) @ prob.r if len(basis) else prob.r
    if np.linalg.norm(r_proj) <= PROJ_INFEASIBLE_TOL * np.linalg.norm(prob.r):
        return _infeasible(n, prob.Y.shape[1])
    return solve_row_recovery(RowRecoveryProblem(prob.Y, r_proj))


def lp_vertex_oracle(prob: RowRecoveryProblem) -> float:
    """Exact optimum of the row-recovery LP by enumerating basic solutions.

    An optimum is attained where a maximal independent set of the constraints
    ``s_j = 0`` is tight together with ``r^T w = 1``.  All column subsets of
    size up to ``n - 1`` are tried; only tiny problems are accepted.
    """
    Y, r = prob.Y, prob.r
    n, p = Y.shape
    if n > 6 or p > 8:
        raise ConfigError("lp_vertex_oracle only handles n <= 6 and p <= 8")
    if not np.any(r):
        return float("inf")
    best = float("inf")
    for size in range(0, min(p, n - 1) + 1):
        for Z in itertools.combinations(range(p), size):
            A = np.vstack([Y[:, list(Z)].T, r[None, :]])
            rhs = np.zeros(size + 1)
            rhs[-1] = 1.0
            w, *_ = np.linalg.lstsq(A, rhs, rcond=None)
            if np.linalg.norm(A @ w - rhs) > 1e-9:
                continue
            best = min(best, float(np.sum(np.abs(Y.T @ w))))
    return best
