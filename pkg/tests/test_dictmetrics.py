import itertools
import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erspud.dictmetrics import hungarian, rel_error, rows_recovered
from erspud.errors import DimensionError


def brute_rel_error(A_hat, A):
    """Minimum over all column permutations with closed-form scales."""
    n = A.shape[1]
    best = np.inf
    for perm in itertools.permutations(range(n)):
        tot = 0.0
        for j, i in enumerate(perm):
            h = A_hat[:, i]
            hh = h @ h
            lam = (h @ A[:, j]) / hh if hh > 0 else 0.0
            tot += np.sum((lam * h - A[:, j]) ** 2)
        best = min(best, tot)
    return np.sqrt(best) / np.linalg.norm(A)


def test_identical():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert rel_error(A, A).rel_error == pytest.approx(0.0, abs=1e-15)


def test_swapped_and_scaled():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    A_hat = A[:, [1, 0]] * np.array([2.0, -3.0])
    rep = rel_error(A_hat, A)
    assert rep.rel_error < 1e-14
    assert list(rep.assignment) == [1, 0]
    np.testing.assert_allclose(rep.scales, [-1 / 3, 0.5])


def test_hand_example():
    A = np.array([[1.0, 0.0], [0.1, 1.0]])
    rep = rel_error(np.eye(2), A)
    assert rep.rel_error == pytest.approx(np.sqrt(0.01) / np.sqrt(2.01), abs=1e-12)
    assert rep.rel_error == pytest.approx(0.070535, abs=1e-6)
    assert rep.rel_error == pytest.approx(np.sqrt(rep.per_pair_cost.sum()) / np.linalg.norm(A), abs=1e-12)


def test_zero_estimate_scores_one(rng):
    A = rng.normal(size=(4, 4))
    assert rel_error(np.zeros((4, 4)), A).rel_error == pytest.approx(1.0)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        rel_error(np.eye(2), np.eye(3))


def test_hungarian_examples():
    a, t = hungarian([[0.0, 1.0], [1.0, 0.0]])
    assert list(a) == [0, 1] and t == 0.0
    a, t = hungarian([[4.0, 1.0], [2.0, 3.0]])
    assert list(a) == [1, 0] and t == 3.0


def test_hungarian_vs_bruteforce(rng):
    for _ in range(5):
        C = rng.random((6, 6))
        _, total = hungarian(C)
        brute = min(sum(C[i, p[i]] for i in range(6)) for p in itertools.permutations(range(6)))
        assert total == pytest.approx(brute, abs=1e-12)
        for _ in range(20):
            p = rng.permutation(6)
            assert total <= C[np.arange(6), p].sum() + 1e-12


def test_matches_bruteforce_n5(rng):
    for _ in range(10):
        A, A_hat = rng.normal(size=(5, 5)), rng.normal(size=(5, 5))
        assert rel_error(A_hat, A).rel_error == pytest.approx(brute_rel_error(A_hat, A), abs=1e-10)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(2, 7))
def test_ambiguity_class_invariance(seed, n):
    r = np.random.default_rng(seed)
    A = r.normal(size=(n, n))
    P = np.eye(n)[r.permutation(n)]
    L = np.diag(r.uniform(0.2, 5.0, n) * r.choice([-1, 1], n))
    assert rel_error(A @ P @ L, A).rel_error < 1e-10


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 6))
def test_simultaneous_permutation_invariance(seed, n):
    r = np.random.default_rng(seed)
    A, A_hat = r.normal(size=(n, n)), r.normal(size=(n, n))
    p = r.permutation(n)
    assert rel_error(A_hat[:, p], A[:, p]).rel_error == pytest.approx(rel_error(A_hat, A).rel_error, abs=1e-12)


def test_rows_recovered_examples(rng):
    X = rng.normal(size=(4, 10))
    assert rows_recovered(X, X) == 4
    assert rows_recovered(7 * X, X) == 4
    assert rows_recovered(np.zeros((0, 10)), X) == 0
    assert rows_recovered(X[:2] + 1e-3, X) == 0
    assert rows_recovered(np.vstack([X[1], X[1]]), X) == 1


def test_rows_recovered_zero_row_skipped(caplog):
    X = np.array([[1.0, 0.0, 2.0], [0.0, 0.0, 0.0]])
    with caplog.at_level(logging.WARNING):
        assert rows_recovered(X, X) == 1
    assert "all-zero" in caplog.text
    with pytest.raises(ValueError):
        rows_recovered(X, X, tol=0.0)
