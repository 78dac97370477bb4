"""
Why random column constraints beat basis-vector constraints
===========================================================

With ``r = e_i`` the LP works on ``b = A^{-1} e_i``.  For a Hadamard dictionary
every entry of ``b`` has the same magnitude, so there is no dominant entry to
lock onto and the sparsest-independent-vector baseline fails.  Constraints
built from sums of two data columns still succeed.
"""

import numpy as np

from erspud import CoeffModel, gen_coeffs
from erspud.randmodel import hadamard
from erspud.dictmetrics import rel_error, rows_recovered
from erspud.pipelines import recover, siv_baseline
from erspud.xphase import num_samples

n = 8
p = num_samples(n)
A = hadamard(n)
print("|A^{-1} e_0| =", np.abs(np.linalg.solve(A, np.eye(n)[0])))

for seed in range(5):
    X = gen_coeffs(CoeffModel(n, p, k=2, seed=seed))
    Y = A @ X
    siv_rows = rows_recovered(siv_baseline(Y), X)
    dc_err = rel_error(recover(Y, "dc", precondition_data=False, pair_seed=seed).A_hat, A).rel_error
    print("seed %d: SIV rows %d/8, DC error %.1e" % (seed, siv_rows, dc_err))
