"""Small dense real-matrix helpers shared by the model modules.

Matrices are plain ``numpy`` float64 arrays. The helpers add the checks the
rest of the package relies on (shape agreement, finiteness, conditioning of
2x2 inverses, nilpotency before a closed-form exponential).
"""

from math import factorial

import numpy as np


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class SingularMatrixError(ValueError):
    """A 2x2 matrix is too close to singular to invert."""

    def __init__(self, det):
        super().__init__(f"matrix is singular or near-singular (det={det!r})")
        self.det = det


class NilpotencyError(ValueError):
    """The closed-form exponential was asked for a non-nilpotent matrix."""


def as_mat(a, rows=None, cols=None):
    """Return ``a`` as a finite 2-D float64 array, optionally checking its shape."""
    m = np.array(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if rows is not None and m.shape[0] != rows:
        raise DimensionError(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise DimensionError(f"expected {cols} columns, got {m.shape[1]}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def matmul(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim not in (1, 2) or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def inverse2(a):
    """Closed-form inverse of a 2x2 matrix.

    Raises :class:`SingularMatrixError` when ``|det| <= 1e-12 * max|a_ij|**2``.
    """
    a = as_mat(a, 2, 2)
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    scale = float(np.max(np.abs(a)))
    if scale == 0.0 or abs(det) <= 1e-12 * scale * scale:
        raise SingularMatrixError(float(det))
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]]) / det


def thin_svd(a, rank_tol=1e-12):
    """Rank-revealing thin SVD ``a = U @ diag(s) @ V.T``.

    Singular values below ``rank_tol * s_max`` are dropped, so ``U`` is
    ``m x r``, ``s`` has length ``r`` and ``V`` is ``n x r``. A zero matrix has
    rank 0.
    """
    a = as_mat(a)
    if a.size == 0:
        raise DimensionError("thin_svd needs a nonempty matrix")
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(s >= rank_tol * s[0]))
    return u[:, :r], s[:r], vt[:r, :].T


def spectral_norm(a):
    """Induced 2-norm (largest singular value); 0 for an empty matrix."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def expm_nilpotent(a, t, nilpotency_degree=2):
    """``exp(a*t)`` for a nilpotent ``a`` with ``a**nilpotency_degree == 0``.

    The exponential series terminates, so the finite sum is exact.
    """
    a = as_mat(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError(f"expm needs a square matrix, got {a.shape}")
    if nilpotency_degree < 1:
        raise ValueError("nilpotency_degree must be >= 1")
    power = np.linalg.matrix_power(a, nilpotency_degree)
    if np.max(np.abs(power), initial=0.0) >= 1e-12:
        raise NilpotencyError(
            f"matrix power {nilpotency_degree} is not zero "
            f"(max entry {np.max(np.abs(power)):.3e})"
        )
    at = a * t
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, nilpotency_degree):
        term = term @ at
        out = out + term / factorial(k)
    return out
