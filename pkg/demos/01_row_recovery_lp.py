"""
Recovering one sparse row with an l1 linear program
===================================================

Given ``Y = A X`` with sparse ``X``, the rows of ``X`` are the sparsest
vectors in the row space of ``Y``.  Minimizing ``||w^T Y||_1`` under a single
affine normalization ``r^T w = 1`` often lands exactly on one of them.
"""

import numpy as np

from erspud import CoeffModel, DictModel, gen_coeffs, gen_dict
from erspud.dictmetrics import rows_recovered
from erspud.l1lp import RowRecoveryProblem, solve_row_recovery
from erspud.pipelines import numerical_l0

n = 12
p = 200

# a random square dictionary and coefficients with 2 nonzeros per column
A = gen_dict(DictModel(n, "gaussian_iid", seed=1))
X = gen_coeffs(CoeffModel(n, p, k=2, seed=2))
Y = A @ X

print("nonzeros per row of X:", np.count_nonzero(X, axis=1))

# normalize against the first column of Y
sol = solve_row_recovery(RowRecoveryProblem(Y, Y[:, 0]))
print("status:", sol.status, " objective: %.4f" % sol.objective)
print("numerical l0 of w^T Y:", numerical_l0(sol.s)[0])

# the candidate row is a scaled copy of some row of X
print("rows of X matched:", rows_recovered(sol.s[None, :], X))
i = int(np.argmax(np.abs(np.linalg.lstsq(X.T, sol.s, rcond=None)[0])))
print("it is row", i, "which is nonzero on column 0:", X[i, 0] != 0)
