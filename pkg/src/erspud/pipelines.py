"""Candidate generation (SC, DC, proj, SIV), greedy selection and dictionary
reconstruction.

Every pipeline collects candidate rows ``s = w^T Y`` from l1 row-recovery LPs;
they differ only in how the constraint vector ``r`` is chosen:

* ``spud_sc``   -- each column ``Y e_j``
* ``spud_dc``   -- sums of randomly paired columns ``Y e_j1 + Y e_j2``
* ``siv_baseline`` -- the standard basis vectors ``e_i``
* ``spud_proj`` -- columns projected away from the already chosen ``w``'s,
  one round per dictionary atom.

:func:`recover` chains preconditioning, candidate generation, greedy selection
and reconstruction into a single call.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import densela
from .densela import as_mat, inv_sqrt_spd, orthobasis_append, rank_with_tol, solve_linear
from .errors import (
    ConfigError,
    NotSPDError,
    RankDeficiencyError,
    ReconstructionError,
    SingularMatrixError,
)
from .l1lp import RowRecoveryProblem, solve_projected_row_recovery, solve_row_recovery
from .randmodel import make_rng

log = logging.getLogger(__name__)

ZERO_TOL_REL = 1e-6
RANK_TOL = densela.DEFAULT_RANK_TOL
METHODS = ("sc", "dc", "proj", "siv")


@dataclass
class CandidateSet:
    """Candidate rows ``s = w^T Y`` with the LP weights that produced them.

    ``sources`` holds one tuple per candidate describing the constraint:
    ``("col", j)``, ``("pair", j1, j2)``, ``("basis", i)`` or
    ``("proj", round, j)``.
    """

    w: np.ndarray
    s: np.ndarray
    sources: list
    skipped: list = field(default_factory=list)

    def __len__(self):
        return len(self.sources)

    @classmethod
    def empty(cls, n: int, p: int) -> "CandidateSet":
        return cls(w=np.zeros((0, n)), s=np.zeros((0, p)), sources=[])


@dataclass
class RecoveryResult:
    X_hat: np.ndarray
    A_hat: np.ndarray
    chosen: list
    zero_tol_used: float
    candidates: CandidateSet | None = None


def numerical_l0(s, zero_tol_rel: float = ZERO_TOL_REL) -> np.ndarray:
    """Count entries with ``|s_i| > zero_tol_rel * ||s||_inf`` (row-wise for 2-D input)."""
    s = np.atleast_2d(np.asarray(s, dtype=np.float64))
    top = np.max(np.abs(s), axis=1, keepdims=True)
    return np.sum((np.abs(s) > zero_tol_rel * top) & (top > 0), axis=1)


def _collect(Y, constraints, sources) -> CandidateSet:
    n, p = Y.shape
    ws, ss, kept, skipped = [], [], [], []
    for r, src in zip(constraints, sources):
        if not np.any(r):
            skipped.append(src)
            continue
        sol = solve_row_recovery(RowRecoveryProblem(Y, r))
        if not sol.optimal:
            skipped.append(src)
            continue
        ws.append(sol.w)
        ss.append(sol.s)
        kept.append(src)
    if skipped:
        log.debug("skipped %d zero constraint vectors", len(skipped))
    if not kept:
        cs = CandidateSet.empty(n, p)
        cs.skipped = skipped
        return cs
    return CandidateSet(w=np.array(ws), s=np.array(ss), sources=kept, skipped=skipped)


def spud_sc(Y) -> CandidateSet:
    """One LP per column of ``Y`` with ``r = Y e_j``."""
    Y = as_mat(Y)
    cands = _collect(Y, Y.T, [("col", j) for j in range(Y.shape[1])])
    if not len(cands):
        raise RankDeficiencyError("all columns of Y are zero", found=0)
    return cands


def random_pairing(p: int, seed: int):
    """Uniform random perfect matching of ``range(p)``.

    For odd ``p`` one uniformly chosen column is left out.
    """
    if p < 2:
        raise ConfigError("pairing needs at least two columns")
    perm = make_rng(seed).permutation(p)
    return [(int(perm[2 * i]), int(perm[2 * i + 1])) for i in range(p // 2)]


def spud_dc(Y, pair_seed: int = 0) -> CandidateSet:
    """One LP per random column pair with ``r = Y e_j1 + Y e_j2``."""
    Y = as_mat(Y)
    pairs = random_pairing(Y.shape[1], pair_seed)
    constraints = [Y[:, a] + Y[:, b] for a, b in pairs]
    cands = _collect(Y, constraints, [("pair", a, b) for a, b in pairs])
    if not len(cands):
        raise RankDeficiencyError("every paired constraint vector is zero", found=0)
    return cands


def siv_baseline(Y) -> CandidateSet:
    """Sparsest-independent-vector baseline: ``r = e_i`` for each row index."""
    Y = as_mat(Y)
    n = Y.shape[0]
    return _collect(Y, np.eye(n), [("basis", i) for i in range(n)])


def greedy_select(
    cands: CandidateSet,
    n: int,
    zero_tol_rel: float = ZERO_TOL_REL,
    rank_tol: float = RANK_TOL,
    return_indices: bool = False,
):
    """Pick ``n`` independent candidates of smallest numerical l0.

    Candidates are scanned in ascending l0 (stable, so ties keep insertion
    order) and accepted when they enlarge the span of those already taken.
    """
    if not len(cands):
        raise RankDeficiencyError("candidate set is empty", found=0)
    l0 = numerical_l0(cands.s, zero_tol_rel)
    order = np.argsort(l0, kind="stable")
    basis, chosen = [], []
    for idx in order:
        u = orthobasis_append(basis, cands.s[idx], rank_tol)
        if u is None:
            continue
        basis.append(u)
        chosen.append(int(idx))
        if len(chosen) == n:
            break
    if len(chosen) < n:
        raise RankDeficiencyError(
            f"only {len(chosen)} independent candidates, need {n}", found=len(chosen)
        )
    X_hat = cands.s[chosen].copy()
    return (X_hat, chosen) if return_indices else X_hat


def reconstruct_dict(Y, X_hat) -> np.ndarray:
    """``A = Y Y^T (X_hat Y^T)^{-1}``, solved as ``(Y X_hat^T) A^T = Y Y^T``."""
    Y = as_mat(Y)
    X_hat = as_mat(X_hat)
    try:
        return solve_linear(Y @ X_hat.T, Y @ Y.T).T
    except SingularMatrixError as exc:
        raise ReconstructionError("X_hat Y^T is singular") from exc


def precondition(Y):
    """Return ``(Yp, T)`` with ``T = (Y Y^T)^{-1/2}`` and ``Yp = T Y``.

    A weight vector ``w`` found on ``Yp`` corresponds to ``T w`` on ``Y``.
    """
    Y = as_mat(Y)
    try:
        T = inv_sqrt_spd(Y @ Y.T)
    except NotSPDError as exc:
        raise RankDeficiencyError("Y Y^T is not positive definite") from exc
    return T @ Y, T


def spud_proj(Y, cols_per_round: int | None = None, zero_tol_rel: float = ZERO_TOL_REL) -> RecoveryResult:
    """Iterative-projection recovery.

    Round ``i`` solves the LP with constraint ``(P Y e_j)^T w = 1`` for the
    first ``cols_per_round`` columns, ``P`` projecting away from the span of
    the weights already chosen, keeps the solution whose ``w^T Y`` has the
    smallest numerical l0 (first index on ties), and adds its ``w`` to the
    span.
    """
    Y = as_mat(Y)
    n, p = Y.shape
    cols = p if cols_per_round is None else int(cols_per_round)
    if not 1 <= cols <= p:
        raise ConfigError("cols_per_round must lie in [1, p]")
    basis, W, chosen = [], [], []
    ws, ss, srcs = [], [], []
    for i in range(n):
        best = None
        for j in range(cols):
            sol = solve_projected_row_recovery(Y, Y[:, j], basis)
            if not sol.optimal:
                continue
            l0 = int(numerical_l0(sol.s, zero_tol_rel)[0])
            ws.append(sol.w)
            ss.append(sol.s)
            srcs.append(("proj", i, j))
            if best is None or l0 < best[0]:
                best = (l0, j, sol)
        if best is None:
            raise RankDeficiencyError(f"round {i}: every projected LP is infeasible", found=i)
        w = best[2].w
        u = orthobasis_append(basis, w, RANK_TOL)
        if u is None:
            raise RankDeficiencyError(f"round {i}: chosen weight lies in the current span", found=i)
        basis.append(u)
        W.append(w)
        chosen.append(("proj", i, best[1]))
    W = np.array(W)
    X_hat = W @ Y
    cands = CandidateSet(w=np.array(ws), s=np.array(ss), sources=srcs)
    return RecoveryResult(
        X_hat=X_hat,
        A_hat=reconstruct_dict(Y, X_hat),
        chosen=chosen,
        zero_tol_used=zero_tol_rel,
        candidates=cands,
    )


def recover(
    Y,
    method: str = "dc",
    *,
    precondition_data: bool = True,
    pair_seed: int = 0,
    cols_per_round: int | None = None,
    zero_tol_rel: float = ZERO_TOL_REL,
    rank_tol: float = RANK_TOL,
) -> RecoveryResult:
    """Full dictionary recovery ``Y -> (A_hat, X_hat)``.

    With ``precondition_data`` the candidates are computed on
    ``(Y Y^T)^{-1/2} Y`` and their weights mapped back to ``Y``; candidate rows
    ``s`` are unaffected by the mapping.  The returned dictionary is always
    reconstructed against the original ``Y``.
    """
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}")
    Y = as_mat(Y)
    n = Y.shape[0]
    Yw, T = precondition(Y) if precondition_data else (Y, None)

    if method == "proj":
        res = spud_proj(Yw, cols_per_round, zero_tol_rel)
        if T is not None:
            res.candidates.w = res.candidates.w @ T
        res.A_hat = reconstruct_dict(Y, res.X_hat)
        return res

    if method == "sc":
        cands = spud_sc(Yw)
    elif method == "dc":
        cands = spud_dc(Yw, pair_seed)
    else:
        cands = siv_baseline(Yw)
    if T is not None:
        cands.w = cands.w @ T  # rows w -> T w (T symmetric)
    X_hat, chosen = greedy_select(cands, n, zero_tol_rel, rank_tol, return_indices=True)
    return RecoveryResult(
        X_hat=X_hat,
        A_hat=reconstruct_dict(Y, X_hat),
        chosen=chosen,
        zero_tol_used=zero_tol_rel,
        candidates=cands,
    )


def full_rank(X, tol: float = RANK_TOL) -> bool:
    X = as_mat(X)
    return rank_with_tol(X, tol) == min(X.shape)
