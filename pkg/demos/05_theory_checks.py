"""
Probing the theory numerically
==============================

Each check draws seeded random instances and compares an empirical quantity
to a bound, reporting the margin.  Probabilistic claims get three standard
errors of slack.
"""

import numpy as np

from erspud.theorycheck import (
    bruteforce_sparsest_rowspan,
    check_avg_lower_bound,
    check_gap_statistics,
    check_p1_support,
    check_ub_mechanism,
    check_uniqueness_sparsity,
)

reports = [
    check_uniqueness_sparsity(50, 0.1, 10000, 200, seed=0),
    check_avg_lower_bound(16, 0.25, np.ones(16), 20000, seed=0),
    check_gap_statistics(50, 50, samples=20000, seed=0),
    check_p1_support(20, 1500, 0.05, 2, 10, seed=0),
    check_ub_mechanism(100, 1000, 9.0, seed=0),
    check_ub_mechanism(100, 1000, 9.0, seed=0, theta=0.02, expect_dense=False),
]
for r in reports:
    print("%-22s pass=%-5s statistic=%-10.4g bound=%.4g" % (r.name, r.passed, r.statistic, r.bound))

# the row-l0 bound is only a high-probability statement: with p too small
# relative to n the largest of n binomial row counts crosses it
r = check_uniqueness_sparsity(50, 0.1, 2000, 10, seed=0)
print("n=50, p=2000: max row nnz %d vs bound %.1f" % (r.details["max_row_nnz"], r.details["row_bound"]))

# exhaustive search at toy scale: the sparsest row-space vector of Y = A X
rng = np.random.default_rng(0)
X = np.zeros((3, 8))
X[rng.integers(0, 3, 8), np.arange(8)] = rng.standard_normal(8)
Y = rng.standard_normal((3, 3)) @ X
s, l0 = bruteforce_sparsest_rowspan(Y)
print("sparsest l0 =", l0, " row nnz of X =", np.count_nonzero(X, axis=1))
