"""
Full dictionary recovery
========================

One LP per column pair gives a pool of candidate rows.  Greedy selection keeps
the ``n`` sparsest independent ones, and the dictionary follows from
``A = Y Y^T (X Y^T)^{-1}``.  The error is measured after removing the
permutation and scaling ambiguity.
"""

import numpy as np

from erspud import CoeffModel, DictModel, gen_coeffs, gen_dict
from erspud.dictmetrics import rel_error, rows_recovered
from erspud.pipelines import recover
from erspud.xphase import num_samples

n = 15
p = num_samples(n)  # ceil(5 n ln n)
print("n = %d, p = %d" % (n, p))

A = gen_dict(DictModel(n, seed=10))
X = gen_coeffs(CoeffModel(n, p, k=2, seed=11))
Y = A @ X

for method in ("sc", "dc", "proj"):
    res = recover(Y, method, pair_seed=3)
    rep = rel_error(res.A_hat, A)
    print("%-4s candidates %4d  rows found %2d  relative error %.2e"
          % (method, len(res.candidates), rows_recovered(res.candidates, X), rep.rel_error))

# the matching tells which estimated column corresponds to which true one
rep = rel_error(recover(Y, "dc").A_hat, A)
print("assignment:", rep.assignment)
print("scales:", np.round(rep.scales, 3))

# too many nonzeros per column and the sparsest vectors are no longer rows of X
X_dense = gen_coeffs(CoeffModel(n, p, k=12, seed=12))
res = recover(A @ X_dense, "sc")
print("k = 12: relative error %.3f" % rel_error(res.A_hat, A).rel_error)
