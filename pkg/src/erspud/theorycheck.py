"""Monte-Carlo and brute-force checks of the recovery theory.

Each ``check_*`` function draws seeded random instances, tests one
probabilistic claim and returns a :class:`CheckReport`.  Claims that hold
only with high probability are tested against empirical frequencies with a
three-standard-error allowance, never as certainties.

Unspecified absolute constants are exposed as keyword arguments.  Their
defaults are empirical, not normative.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg

from .densela import as_mat
from .errors import ConfigError
from .l1lp import RowRecoveryProblem, solve_row_recovery
from .pipelines import ZERO_TOL_REL, numerical_l0
from .randmodel import CoeffModel, derive_seed, draw_values, gen_coeffs, make_rng

SE_SLACK = 3.0


@dataclass
class CheckReport:
    name: str
    trials: int
    violations: int
    statistic: float
    bound: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def _se(freq: float, samples: int) -> float:
    return math.sqrt(max(freq * (1.0 - freq), 0.0) / samples)


def _bg(n, p, theta, seed, dist="gaussian"):
    return gen_coeffs(CoeffModel(n, p, theta=theta, dist=dist, seed=seed))


def check_uniqueness_sparsity(n, theta, p, trials, seed, *, C: float = 10.0) -> CheckReport:
    """Row sparsity vs. sparsity of combinations of two or more rows.

    (a) every row of a Bernoulli-Gaussian ``X`` has at most ``(10/9) theta p``
    nonzeros; (b) ``alpha^T X`` has more than ``(11/9) theta p`` nonzeros for
    ``trials`` random ``alpha`` with support size between 2 and ``n``.
    Requires ``1/n < theta < 1/4`` and ``p >= C n ln n``.
    """
    if not 1.0 / n < theta < 0.25:
        raise ConfigError("need 1/n < theta < 1/4")
    if p < C * n * math.log(n):
        raise ConfigError(f"need p >= C n ln n = {C * n * math.log(n):.1f}")
    X = _bg(n, p, theta, derive_seed(seed, [0]))
    row_bound = 10.0 / 9.0 * theta * p
    comb_bound = 11.0 / 9.0 * theta * p
    row_nnz = np.count_nonzero(X, axis=1)
    row_viol = int(np.sum(row_nnz > row_bound))

    comb_viol = 0
    min_comb = np.inf
    for t in range(trials):
        rng = make_rng(derive_seed(seed, [1, t]))
        size = int(rng.integers(2, n + 1))
        support = rng.permutation(n)[:size]
        alpha = np.zeros(n)
        alpha[support] = draw_values(rng, size)
        nnz = int(np.count_nonzero(alpha @ X))
        min_comb = min(min_comb, nnz)
        if nnz < comb_bound:
            comb_viol += 1
    return CheckReport(
        name="uniqueness_sparsity",
        trials=trials,
        violations=row_viol + comb_viol,
        statistic=float(min_comb),
        bound=comb_bound,
        passed=row_viol == 0 and comb_viol == 0,
        details={
            "row_violations": row_viol,
            "combination_violations": comb_viol,
            "max_row_nnz": int(row_nnz.max()),
            "row_bound": row_bound,
            "min_combination_nnz": int(min_comb),
            "combination_bound": comb_bound,
        },
    )


def check_row_l1_concentration(n, p, theta, delta, seed, *, dist: str = "gaussian") -> CheckReport:
    """Largest row l1 norm lies in ``[(1-delta), (1+delta)] mu theta p``."""
    if not 0.0 < delta < 1.0:
        raise ConfigError("delta must lie in (0, 1)")
    model = CoeffModel(n, p, theta=theta, dist=dist, seed=derive_seed(seed, [0]))
    X = gen_coeffs(model)
    stat = float(np.max(np.sum(np.abs(X), axis=1)))
    center = model.mu * theta * p
    lo, hi = (1 - delta) * center, (1 + delta) * center
    ok = lo <= stat <= hi
    return CheckReport(
        name="row_l1_concentration",
        trials=1,
        violations=0 if ok else 1,
        statistic=stat,
        bound=hi,
        passed=ok,
        details={"lower": lo, "upper": hi, "mu": model.mu},
    )


def check_avg_lower_bound(n, theta, v, samples, seed, *, dist: str = "gaussian") -> CheckReport:
    """Monte-Carlo estimate of ``E|v^T x|`` against ``(mu/4) sqrt(theta/n) ||v||_1``.

    Passes when ``estimate >= bound - 3 SE``.
    """
    if n * theta < 2:
        raise ConfigError("need n * theta >= 2")
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.shape[0] != n:
        raise ConfigError("v must have length n")
    model = CoeffModel(n, samples, theta=theta, dist=dist, seed=derive_seed(seed, [0]))
    vals = np.abs(v @ gen_coeffs(model))
    est = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    bound = model.mu / 4.0 * math.sqrt(theta / n) * float(np.sum(np.abs(v)))
    ok = est >= bound - SE_SLACK * se
    return CheckReport(
        name="avg_lower_bound",
        trials=samples,
        violations=0 if ok else 1,
        statistic=est,
        bound=bound,
        passed=ok,
        details={"standard_error": se},
    )


def check_gap_statistics(d, n, alpha: float = 0.05, samples: int = 100_000, seed: int = 0, *,
                         chunk: int = 20000) -> CheckReport:
    """Order statistics ``s(1) >= s(2)`` of ``|r|`` for Gaussian ``r`` in R^d.

    Tests that the frequency of ``s(1) > 4 sqrt(ln d)`` is at most ``d^-3``
    and the frequency of ``1 - s(2)/s(1) < alpha / ln n`` is below 1/2, each
    with three standard errors of slack.
    """
    if not 2 <= d <= n:
        raise ConfigError("need 2 <= d <= n")
    if alpha < 0:
        raise ConfigError("alpha must be non-negative")
    rng = make_rng(derive_seed(seed, [0]))
    max_thresh = 4.0 * math.sqrt(math.log(d))
    gap_thresh = alpha / math.log(n)
    big = small_gap = 0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        r = np.abs(draw_values(rng, (m, d)))
        top2 = -np.partition(-r, 1, axis=1)[:, :2]
        big += int(np.sum(top2[:, 0] > max_thresh))
        small_gap += int(np.sum(1.0 - top2[:, 1] / top2[:, 0] < gap_thresh))
        done += m
    f_max = big / samples
    f_gap = small_gap / samples
    max_bound = float(d) ** -3
    ok_max = f_max <= max_bound + SE_SLACK * _se(f_max, samples)
    ok_gap = f_gap < 0.5 + SE_SLACK * _se(f_gap, samples)
    return CheckReport(
        name="gap_statistics",
        trials=samples,
        violations=int(not ok_max) + int(not ok_gap),
        statistic=f_gap,
        bound=0.5,
        passed=ok_max and ok_gap,
        details={
            "max_exceed_freq": f_max,
            "max_exceed_bound": max_bound,
            "max_pass": ok_max,
            "small_gap_freq": f_gap,
            "gap_threshold": gap_thresh,
            "gap_pass": ok_gap,
        },
    )


def check_p1_support(n, p, theta, b_sparsity, trials, seed, *, zero_tol_rel: float = ZERO_TOL_REL) -> CheckReport:
    """LP solutions stay inside the support of a sparse constraint vector.

    Per trial: draw ``X`` and ``b`` with ``b_sparsity`` Gaussian nonzeros,
    solve ``min ||z^T X||_1 s.t. b^T z = 1`` and flag any ``z`` entry outside
    ``supp(b)`` above the numerical-zero threshold.
    """
    if b_sparsity < 1 or b_sparsity > 1.0 / (8.0 * theta):
        raise ConfigError("need 1 <= b_sparsity <= 1/(8 theta)")
    violations = 0
    worst = 0.0
    for t in range(trials):
        X = _bg(n, p, theta, derive_seed(seed, [t, 0]))
        rng = make_rng(derive_seed(seed, [t, 1]))
        supp = rng.permutation(n)[:b_sparsity]
        b = np.zeros(n)
        b[supp] = draw_values(rng, b_sparsity)
        sol = solve_row_recovery(RowRecoveryProblem(X, b))
        z = sol.w
        off = np.ones(n, dtype=bool)
        off[supp] = False
        leak = float(np.max(np.abs(z[off]), initial=0.0) / np.max(np.abs(z)))
        worst = max(worst, leak)
        if leak > zero_tol_rel:
            violations += 1
    return CheckReport(
        name="p1_support",
        trials=trials,
        violations=violations,
        statistic=worst,
        bound=zero_tol_rel,
        passed=violations == 0,
    )


def _gapped_vector(rng, s, gamma):
    b = draw_values(rng, s)
    if s == 1:
        return b
    order = np.argsort(-np.abs(b))
    need = abs(b[order[1]]) / (1.0 - gamma)
    if abs(b[order[0]]) < need:
        b[order[0]] = math.copysign(need, b[order[0]])
    return b


def check_p2_onesparse(n, p, theta, s, gamma, trials, seed, *, zero_tol_rel: float = ZERO_TOL_REL) -> CheckReport:
    """Restricted LP over ``s`` random rows has a 1-sparse solution at ``argmax |b|``.

    ``b`` is Gaussian with its largest entry enlarged where needed so that
    ``|b|_(2) / |b|_(1) <= 1 - gamma``.  Requires ``theta s < gamma / 8``.
    """
    if not (0.0 < gamma < 1.0 and theta * s < gamma / 8.0):
        raise ConfigError("need 0 < gamma < 1 and theta * s < gamma / 8")
    if not 1 <= s <= n:
        raise ConfigError("need 1 <= s <= n")
    violations = 0
    worst = 0.0
    for t in range(trials):
        X = _bg(n, p, theta, derive_seed(seed, [t, 0]))
        rng = make_rng(derive_seed(seed, [t, 1]))
        J = rng.permutation(n)[:s]
        b = _gapped_vector(rng, s, gamma)
        sol = solve_row_recovery(RowRecoveryProblem(X[J], b))
        z = sol.w
        top = int(np.argmax(np.abs(b)))
        rest = np.delete(z, top)
        leak = float(np.max(np.abs(rest), initial=0.0) / np.max(np.abs(z)))
        worst = max(worst, leak)
        if leak > zero_tol_rel or abs(z[top]) == 0.0:
            violations += 1
    return CheckReport(
        name="p2_onesparse",
        trials=trials,
        violations=violations,
        statistic=worst,
        bound=zero_tol_rel,
        passed=violations == 0,
    )


def dense_vs_onesparse(X):
    """For each column ``b = X e_j``: does ``sign(b)/||b||_1`` strictly beat
    every feasible 1-sparse point ``e_i / b_i``?

    Returns ``(wins, valid)`` boolean arrays; ``valid`` is False for zero
    columns, which admit no feasible point.
    """
    X = as_mat(X)
    signs = np.sign(X)
    b_l1 = np.sum(np.abs(X), axis=0)
    valid = b_l1 > 0
    dense = np.sum(np.abs(signs.T @ X), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        dense = dense / b_l1
        row_l1 = np.sum(np.abs(X), axis=1)
        ratio = np.where(X != 0, row_l1[:, None] / np.abs(X), np.inf)
    best_sparse = np.where(valid, ratio.min(axis=0), 0.0)
    margin = 1e-12 * np.maximum(best_sparse, 1.0)
    wins = valid & (dense < best_sparse - margin)
    return wins, valid


def check_ub_mechanism(n, p, beta, seed, *, theta: float | None = None, expect_dense: bool = True,
                       threshold: float | None = None) -> CheckReport:
    """Fraction of columns ``b = X e_j`` on which the dense feasible point
    ``sign(b)/||b||_1`` has a smaller objective than every 1-sparse one.

    ``theta`` defaults to ``sqrt(beta ln n / n)``.  With ``expect_dense`` the
    check passes when the fraction exceeds ``threshold`` (default 1/2);
    otherwise it passes when the fraction is below ``threshold`` (default 0.1).
    """
    if theta is None:
        theta = math.sqrt(beta * math.log(n) / n)
    if not 0.0 < theta < 1.0:
        raise ConfigError("theta must lie in (0, 1)")
    if threshold is None:
        threshold = 0.5 if expect_dense else 0.1
    X = _bg(n, p, theta, derive_seed(seed, [0]))
    wins, valid = dense_vs_onesparse(X)
    frac = float(wins.sum() / max(valid.sum(), 1))
    ok = frac > threshold if expect_dense else frac < threshold
    return CheckReport(
        name="ub_mechanism",
        trials=int(valid.sum()),
        violations=int(valid.sum() - wins.sum()) if expect_dense else int(wins.sum()),
        statistic=frac,
        bound=threshold,
        passed=bool(ok),
        details={"theta": theta, "zero_columns": int((~valid).sum())},
    )


def _null_vector(M):
    """Unit vector spanning the null space of ``M`` when it is one-dimensional."""
    _, sv, vt = scipy.linalg.svd(M)
    n = vt.shape[0]
    scale = sv[0] if sv.size else 1.0
    rank = int(np.sum(sv > 1e-10 * max(scale, 1e-300)))
    if rank != n - 1:
        return None
    return vt[-1]


def rowspan_candidates(Y, zero_tol_rel: float = 1e-9):
    """All vectors in ``row(Y)`` whose zero set contains ``rank - 1`` independent columns.

    Every sparsest nonzero vector of the row space is (a multiple of) one of
    these.  Returns ``(S, l0)`` sorted by ascending l0, with duplicates up to
    scale removed.
    """
    Y = as_mat(Y)
    n, p = Y.shape
    if n > 5 or p > 12:
        raise ConfigError("brute-force search is limited to n <= 5, p <= 12")
    # work in an orthonormal basis of the row space so rank-deficient Y is handled
    U, sv, Vt = scipy.linalg.svd(Y, full_matrices=False)
    r = int(np.sum(sv > 1e-10 * sv[0])) if sv.size and sv[0] > 0 else 0
    if r == 0:
        return np.zeros((0, p)), np.zeros(0, dtype=int)
    B = Vt[:r]  # rows span row(Y)
    found = []
    for Z in itertools.combinations(range(p), r - 1):
        c = np.ones(1) if r == 1 else _null_vector(B[:, list(Z)].T)
        if c is None:
            continue
        s = c @ B
        found.append(s / np.max(np.abs(s)))
    if not found:
        return np.zeros((0, p)), np.zeros(0, dtype=int)
    S = np.array(found)
    l0 = numerical_l0(S, zero_tol_rel)
    order = np.argsort(l0, kind="stable")
    keep, seen = [], []
    for i in order:
        v = S[i]
        if any(min(np.linalg.norm(v - u), np.linalg.norm(v + u)) < 1e-8 for u in seen):
            continue
        seen.append(v)
        keep.append(i)
    return S[keep], l0[keep]


def bruteforce_sparsest_rowspan(Y, max_support: int | None = None):
    """Sparsest nonzero vector of ``row(Y)`` by exhaustive enumeration.

    Returns ``(s, l0)``; ``s`` is ``None`` when no vector with at most
    ``max_support`` nonzeros exists.
    """
    S, l0 = rowspan_candidates(Y)
    if not len(l0):
        return None, 0
    if max_support is not None and l0[0] > max_support:
        return None, int(l0[0])
    return S[0], int(l0[0])


CHECKS = {
    "uniqueness_sparsity": check_uniqueness_sparsity,
    "row_l1_concentration": check_row_l1_concentration,
    "avg_lower_bound": check_avg_lower_bound,
    "gap_statistics": check_gap_statistics,
    "p1_support": check_p1_support,
    "p2_onesparse": check_p2_onesparse,
    "ub_mechanism": check_ub_mechanism,
}
