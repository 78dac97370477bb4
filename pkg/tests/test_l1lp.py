import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from erspud.errors import ConfigError, DimensionError, InputError
from erspud.l1lp import (
    RowRecoveryProblem,
    lp_vertex_oracle,
    projector_complement,
    solve_projected_row_recovery,
    solve_row_recovery,
)
from erspud.simplex import bounded_simplex


def solve(Y, r):
    return solve_row_recovery(RowRecoveryProblem(Y, r))


def highs_objective(Y, r):
    """Slack formulation min sum t, -t <= Y^T w <= t, r^T w = 1 via HiGHS."""
    n, p = Y.shape
    c = np.concatenate([np.zeros(n), np.ones(p)])
    A_ub = np.block([[Y.T, -np.eye(p)], [-Y.T, -np.eye(p)]])
    A_eq = np.concatenate([r, np.zeros(p)])[None, :]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(2 * p), A_eq=A_eq, b_eq=[1.0],
                  bounds=[(None, None)] * n + [(0, None)] * p, method="highs")
    assert res.status == 0
    return res.fun


def test_identity_forced():
    sol = solve(np.eye(2), [1.0, 0.0])
    assert sol.optimal
    np.testing.assert_allclose(sol.w, [1.0, 0.0], atol=1e-12)
    assert sol.objective == pytest.approx(1.0)


def test_two_by_two_vertex():
    sol = solve([[1.0, 1.0], [0.0, 1.0]], [1.0, 0.0])
    np.testing.assert_allclose(sol.w, [1.0, -1.0], atol=1e-12)
    np.testing.assert_allclose(sol.s, [1.0, 0.0], atol=1e-12)
    assert sol.objective == pytest.approx(1.0)


def test_oracle_examples():
    assert lp_vertex_oracle(RowRecoveryProblem(np.eye(2), [1.0, 0.0])) == pytest.approx(1.0)
    assert lp_vertex_oracle(RowRecoveryProblem([[2.0]], [1.0])) == pytest.approx(2.0)
    with pytest.raises(ConfigError):
        lp_vertex_oracle(RowRecoveryProblem(np.ones((7, 3)), np.ones(7)))


def test_matches_vertex_oracle_on_tiny_instances():
    r = np.random.default_rng(11)
    for _ in range(100):
        n, p = int(r.integers(1, 5)), int(r.integers(1, 7))
        prob = RowRecoveryProblem(r.normal(size=(n, p)), r.normal(size=n))
        assert solve_row_recovery(prob).objective == pytest.approx(lp_vertex_oracle(prob), abs=1e-7)


@pytest.mark.parametrize("n,p", [(5, 30), (10, 60), (20, 200)])
def test_matches_highs(n, p):
    r = np.random.default_rng(n * p)
    for _ in range(5):
        Y = r.normal(size=(n, p)) * (r.random((n, p)) < 0.3)
        rv = Y[:, int(r.integers(p))] + 0.01 * r.normal(size=n)
        sol = solve(Y, rv)
        ref = highs_objective(Y, rv)
        assert sol.objective == pytest.approx(ref, rel=1e-7, abs=1e-9)


def test_zero_constraint_is_infeasible():
    sol = solve(np.eye(3), np.zeros(3))
    assert sol.status == "infeasible"


def test_input_validation():
    with pytest.raises(InputError):
        RowRecoveryProblem([[1.0, np.nan]], [1.0])
    with pytest.raises(DimensionError):
        RowRecoveryProblem(np.eye(2), [1.0, 0.0, 0.0])


def test_r_outside_row_space_gives_zero():
    # rank-1 Y; w orthogonal to its column space but with r^T w = 1
    Y = np.outer([1.0, 0.0], [1.0, 2.0, 3.0])
    sol = solve(Y, [0.0, 1.0])
    assert sol.objective == pytest.approx(0.0, abs=1e-12)
    assert sol.w @ [0.0, 1.0] == pytest.approx(1.0)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(0.05, 20.0), st.booleans())
def test_scale_invariance(seed, c, neg):
    r = np.random.default_rng(seed)
    Y, rv = r.normal(size=(4, 12)), r.normal(size=4)
    c = -c if neg else c
    base = solve(Y, rv).objective
    assert solve(Y, c * rv).objective == pytest.approx(base / abs(c), rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_change_of_variables(seed):
    r = np.random.default_rng(seed)
    n, p = 5, 25
    X = r.normal(size=(n, p)) * (r.random((n, p)) < 0.4)
    A = r.normal(size=(n, n)) + 3 * np.eye(n)
    rv = r.normal(size=n)
    b = np.linalg.solve(A, rv)
    via_y = solve(A @ X, rv)
    via_x = solve(X, b)
    assert via_y.objective == pytest.approx(via_x.objective, rel=1e-7, abs=1e-9)
    # A^T w is feasible for the X-problem with the same objective
    z = A.T @ via_y.w
    assert b @ z == pytest.approx(1.0)
    assert np.sum(np.abs(z @ X)) == pytest.approx(via_x.objective, rel=1e-7)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 8), st.integers(1, 40))
def test_feasibility_and_nonnegativity(seed, n, p):
    r = np.random.default_rng(seed)
    Y, rv = r.normal(size=(n, p)), r.normal(size=n)
    sol = solve(Y, rv)
    assert sol.optimal
    assert abs(rv @ sol.w - 1.0) <= 1e-9
    assert sol.objective >= 0.0
    assert sol.objective == pytest.approx(np.sum(np.abs(sol.s)), rel=1e-9)
    np.testing.assert_allclose(sol.s, Y.T @ sol.w, atol=1e-12 * max(1, np.abs(sol.s).max()))
    assert sol.extra["dual_objective"] == pytest.approx(sol.objective, rel=1e-8, abs=1e-10)


def test_projected_empty_basis_equals_plain(rng):
    Y, rv = rng.normal(size=(4, 10)), rng.normal(size=4)
    a = solve_projected_row_recovery(Y, rv, [])
    b = solve(Y, rv)
    np.testing.assert_array_equal(a.w, b.w)


def test_projected_full_basis_infeasible(rng):
    Y = rng.normal(size=(3, 6))
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    assert solve_projected_row_recovery(Y, Y[:, 0], list(q.T)).status == "infeasible"


def test_projected_equals_explicit_projection(rng):
    Y, rv = rng.normal(size=(3, 9)), rng.normal(size=3)
    u = rng.normal(size=3)
    u /= np.linalg.norm(u)
    explicit = solve(Y, (np.eye(3) - np.outer(u, u)) @ rv)
    proj = solve_projected_row_recovery(Y, rv, [u])
    np.testing.assert_allclose(proj.w, explicit.w, atol=1e-8)
    np.testing.assert_allclose(projector_complement([u], 3) @ u, 0.0, atol=1e-15)


def test_bounded_simplex_small_lp():
    # max x1 + x2 s.t. x1 + 2 x2 + s = 4, 0 <= x1 <= 3, 0 <= x2 <= 5, s >= 0
    M = np.array([[1.0, 2.0, 1.0]])
    res = bounded_simplex(M, [4.0], [-1.0, -1.0, 0.0], [0, 0, 0], [3, 5, np.inf],
                          basis=[2], x0=[0.0, 0.0, 4.0])
    np.testing.assert_allclose(res.x, [3.0, 0.5, 0.0], atol=1e-12)
    assert res.objective == pytest.approx(-3.5)


def test_bland_rule_reaches_same_optimum(rng):
    Y, rv = rng.normal(size=(6, 40)), rng.normal(size=6)
    n, p = Y.shape
    M = np.hstack([Y, -rv[:, None], np.eye(n)])
    c = np.zeros(p + 1 + n)
    c[p] = -1.0
    lb = np.concatenate([-np.ones(p), [-np.inf], np.zeros(n)])
    ub = np.concatenate([np.ones(p), [np.inf], np.zeros(n)])
    args = (M, np.zeros(n), c, lb, ub, np.arange(p + 1, p + 1 + n), np.zeros(p + 1 + n))
    dantzig = bounded_simplex(*args)
    bland = bounded_simplex(*args, bland_after=0)
    assert bland.bland_engaged
    assert bland.objective == pytest.approx(dantzig.objective, rel=1e-9)
    assert -dantzig.objective == pytest.approx(solve(Y, rv).objective, rel=1e-9)
