"""Recovery metrics modulo the permutation-scale ambiguity.

The relative error ``min_{P, L} ||A_hat L P - A||_F / ||A||_F`` separates over
columns: once column ``i`` of ``A_hat`` is assigned to column ``j`` of ``A``
the best scale is ``<a_hat_i, a_j> / ||a_hat_i||^2`` and the residual is
``||a_j||^2 - <a_hat_i, a_j>^2 / ||a_hat_i||^2``.  The minimum over
permutations is then an assignment problem on that cost matrix.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .densela import as_mat
from .errors import DimensionError

log = logging.getLogger(__name__)


@dataclass
class MatchReport:
    """``assignment[j]`` is the column of ``A_hat`` matched to column ``j`` of ``A``;
    ``scales[j]`` multiplies that column."""

    assignment: np.ndarray
    scales: np.ndarray
    rel_error: float
    per_pair_cost: np.ndarray

    def to_dict(self) -> dict:
        return {
            "assignment": [int(i) for i in self.assignment],
            "scales": [float(s) for s in self.scales],
            "rel_error": float(self.rel_error),
            "per_pair_cost": [float(c) for c in self.per_pair_cost],
        }


def hungarian(cost):
    """Minimum-cost perfect assignment.

    Returns ``(assignment, total)`` where row ``i`` is assigned to column
    ``assignment[i]``.
    """
    cost = as_mat(cost)
    if cost.shape[0] != cost.shape[1]:
        raise DimensionError("cost matrix must be square")
    rows, cols = linear_sum_assignment(cost)
    assignment = np.empty(cost.shape[0], dtype=np.int64)
    assignment[rows] = cols
    return assignment, float(cost[rows, cols].sum())


def pair_costs(A_hat, A):
    """Cost and optimal scale of matching column ``i`` of ``A_hat`` to column ``j`` of ``A``.

    A zero column of ``A_hat`` gets scale 0 and cost ``||a_j||^2``.
    """
    A_hat = as_mat(A_hat)
    A = as_mat(A)
    inner = A_hat.T @ A  # (i, j) -> <a_hat_i, a_j>
    hat_sq = np.sum(A_hat * A_hat, axis=0)
    a_sq = np.sum(A * A, axis=0)
    nz = hat_sq > 0
    scales = np.zeros_like(inner)
    scales[nz] = inner[nz] / hat_sq[nz, None]
    # direct residual avoids cancellation when the match is nearly exact
    cost = np.empty_like(inner)
    for i in range(A_hat.shape[1]):
        resid = scales[i][None, :] * A_hat[:, i][:, None] - A
        cost[i] = np.sum(resid * resid, axis=0)
    cost[~nz] = a_sq[None, :]
    return cost, scales


def rel_error(A_hat, A) -> MatchReport:
    """Relative Frobenius error after optimal column permutation and scaling."""
    A_hat = as_mat(A_hat)
    A = as_mat(A)
    if A_hat.shape != A.shape or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected two equal square matrices, got {A_hat.shape} and {A.shape}")
    cost, scales = pair_costs(A_hat, A)
    row_to_col, _ = hungarian(cost)
    n = A.shape[1]
    assignment = np.empty(n, dtype=np.int64)
    assignment[row_to_col] = np.arange(n)
    per_pair = cost[assignment, np.arange(n)]
    norm_a = np.linalg.norm(A)
    return MatchReport(
        assignment=assignment,
        scales=scales[assignment, np.arange(n)],
        rel_error=float(np.sqrt(per_pair.sum()) / norm_a),
        per_pair_cost=per_pair,
    )


def row_match_residuals(S, X_true) -> np.ndarray:
    """``R[c, i] = min_lam ||lam S_c - X_i|| / ||X_i||`` for every candidate/row pair."""
    S = np.atleast_2d(np.asarray(S, dtype=np.float64))
    X_true = as_mat(X_true)
    x_norm = np.linalg.norm(X_true, axis=1)
    s_sq = np.sum(S * S, axis=1)
    out = np.full((S.shape[0], X_true.shape[0]), np.inf)
    for c in range(S.shape[0]):
        if s_sq[c] == 0:
            continue
        lam = (X_true @ S[c]) / s_sq[c]
        resid = np.linalg.norm(lam[:, None] * S[c][None, :] - X_true, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[c] = resid / x_norm
    return out


def rows_recovered(cands, X_true, tol: float = 1e-6) -> int:
    """Number of rows of ``X_true`` matched up to scale by some candidate row.

    ``cands`` is a :class:`~erspud.pipelines.CandidateSet` or an array of
    candidate rows.  All-zero true rows are skipped.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    S = getattr(cands, "s", cands)
    X_true = as_mat(X_true)
    S = np.asarray(S, dtype=np.float64)
    if S.size == 0:
        return 0
    zero_rows = np.linalg.norm(X_true, axis=1) == 0
    if zero_rows.any():
        log.warning("skipping %d all-zero true rows", int(zero_rows.sum()))
    resid = row_match_residuals(S, X_true)
    hit = np.any(resid <= tol, axis=0) & ~zero_rows
    return int(hit.sum())
