"""Small dense linear algebra kernel.

Matrices are plain two-dimensional ``float64`` numpy arrays.  The helpers here
add the shape checks, tolerances and error types the rest of the package
relies on; heavy lifting (LU, pivoted QR) is delegated to LAPACK through
scipy, except for the symmetric eigensolver used by :func:`inv_sqrt_spd`,
which is a cyclic Jacobi sweep.
"""

from __future__ import annotations

import io
import warnings

import numpy as np
import scipy.linalg

from .errors import DimensionError, NotSPDError, SingularMatrixError

DEFAULT_RANK_TOL = 1e-8


def as_mat(a) -> np.ndarray:
    """Return ``a`` as a 2-D float64 array (vectors become single rows)."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim == 1:
        m = m[None, :]
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got array with ndim={m.ndim}")
    return m


def matmul(a, b) -> np.ndarray:
    a = as_mat(a)
    b = as_mat(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def solve_linear(a, b) -> np.ndarray:
    """Solve ``a @ z = b`` by LU with partial pivoting.

    ``b`` may be a vector or a matrix; the result has the same layout.

    Raises
    ------
    SingularMatrixError
        If a pivot falls below ``1e-12 * max|a|``.
    """
    a = as_mat(a)
    b_arr = np.asarray(b, dtype=np.float64)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError(f"solve_linear needs a square matrix, got {a.shape}")
    if b_arr.shape[0] != n:
        raise DimensionError(f"right-hand side has {b_arr.shape[0]} rows, expected {n}")
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0.0 or not np.isfinite(scale):
        raise SingularMatrixError("matrix is zero or non-finite")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < 1e-12 * scale:
        raise SingularMatrixError("matrix is numerically singular")
    return scipy.linalg.lu_solve((lu, piv), b_arr, check_finite=False)


def rank_with_tol(a, tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank from a column-pivoted QR.

    Counts diagonal entries of R whose magnitude exceeds ``tol * max|a|``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_mat(a)
    if a.size == 0:
        return 0
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return 0
    r = scipy.linalg.qr(a, mode="r", pivoting=True, check_finite=False)[0]
    return int(np.sum(np.abs(np.diag(r)) > tol * scale))


def jacobi_eigh(a, tol: float = 1e-15, max_sweeps: int = 100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, V)`` with ``a = V diag(eigenvalues) V^T``.  Pairs
    ``(p, q)`` are swept in row-cyclic order until the off-diagonal mass drops
    below ``tol`` relative to ``||a||_F``.
    """
    a = np.array(as_mat(a), dtype=np.float64)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError(f"expected a square matrix, got {a.shape}")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    total = np.linalg.norm(a)
    if total == 0.0:
        return np.zeros(n), v
    offmask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        # summing the off-diagonal entries directly; subtracting the diagonal
        # from the total loses half the digits
        off = np.linalg.norm(a[offmask])
        if off <= tol * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v


def inv_sqrt_spd(a) -> np.ndarray:
    """Symmetric inverse square root ``B`` with ``B a B = I``.

    Raises
    ------
    NotSPDError
        If the smallest eigenvalue is at most ``1e-12`` times the largest.
    """
    lam, v = jacobi_eigh(a)
    lam_max = np.max(lam) if lam.size else 0.0
    if lam_max <= 0.0 or np.min(lam) <= 1e-12 * lam_max:
        raise NotSPDError("matrix is not symmetric positive definite")
    b = (v * lam ** -0.5) @ v.T
    return 0.5 * (b + b.T)


def orthobasis_append(basis, v, tol: float = DEFAULT_RANK_TOL):
    """Orthogonalize ``v`` against an orthonormal ``basis``.

    Uses two passes of modified Gram-Schmidt.  Returns the normalized residual,
    or ``None`` when its norm is at most ``tol * ||v||`` (``v`` is numerically
    in the span) or ``v`` is zero.
    """
    v = np.asarray(v, dtype=np.float64).ravel()
    vnorm = np.linalg.norm(v)
    if vnorm == 0.0:
        return None
    res = v.copy()
    for _ in range(2):
        for u in basis:
            res -= np.dot(u, res) * u
    rnorm = np.linalg.norm(res)
    if rnorm <= tol * vnorm:
        return None
    return res / rnorm


def to_csv(a) -> str:
    """Serialize a matrix as CSV text, one row per line, ``%.17g`` entries."""
    buf = io.StringIO()
    np.savetxt(buf, as_mat(a), fmt="%.17g", delimiter=",")
    return buf.getvalue()


def from_csv(text: str) -> np.ndarray:
    rows = [line for line in text.splitlines() if line.strip()]
    return as_mat([[float(x) for x in line.split(",")] for line in rows])


def save_csv(path, a) -> None:
    with open(path, "w") as fh:
        fh.write(to_csv(a))


def load_csv(path) -> np.ndarray:
    with open(path) as fh:
        return from_csv(fh.read())
