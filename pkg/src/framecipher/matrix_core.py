"""Exact integer dense-matrix arithmetic.

Matrices and vectors are numpy arrays with ``dtype=object`` holding Python
ints, so every product is exact at any magnitude; silent wraparound cannot
happen.  When a conservative a-priori bound proves the result fits in int64,
products take a fast native path instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from operator import index

import numpy as np

# int64 holds +/- 2**63 - 1; keep a margin bit for the accumulator.
_INT64_SAFE = 2**62


class MatrixError(ValueError):
    """Shape or domain violation in a matrix operation."""


def int_matrix(rows) -> np.ndarray:
    """Build an exact integer matrix (2-D object array of Python ints).

    Entries must be true integers; floats are rejected rather than
    truncated.
    """
    try:
        arr = np.array([[index(v) for v in row] for row in rows], dtype=object)
    except TypeError as exc:
        raise MatrixError(f"matrix entries must be integers: {exc}") from None
    if arr.ndim != 2 or arr.size == 0:
        raise MatrixError("matrix must be rectangular and non-empty")
    arr.setflags(write=False)
    return arr


def int_vector(entries) -> np.ndarray:
    """Build an exact integer vector (1-D object array of Python ints)."""
    try:
        arr = np.array([index(v) for v in entries], dtype=object)
    except TypeError as exc:
        raise MatrixError(f"vector entries must be integers: {exc}") from None
    if arr.size == 0:
        raise MatrixError("vector must be non-empty")
    arr.setflags(write=False)
    return arr


def _int_bound(arr: np.ndarray) -> int | None:
    """Max |entry| if every entry is a plain int, else None."""
    bound = 0
    for v in arr.flat:
        if type(v) is not int:
            return None
        if v < 0:
            v = -v
        if v > bound:
            bound = v
    return bound


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of integer matrices (or matrix times vector)."""
    if a.ndim != 2 or b.ndim not in (1, 2):
        raise MatrixError("matmul expects a matrix left operand")
    if a.shape[1] != b.shape[0]:
        raise MatrixError(f"shape mismatch: {a.shape} x {b.shape}")
    ba, bb = _int_bound(a), _int_bound(b)
    if (
        ba is not None
        and bb is not None
        and a.shape[1] * max(ba, 1) * max(bb, 1) < _INT64_SAFE
    ):
        return np.dot(a.astype(np.int64), b.astype(np.int64)).astype(object)
    return np.dot(a, b)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor (Kronecker) product: block (i, j) of the result is a[i,j] * b."""
    if a.ndim != 2 or b.ndim != 2:
        raise MatrixError("tensor expects two matrices")
    return np.kron(a, b)


def direct_sum(m: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Concatenate two vectors; the workhorse behind message-plus-garbage blocks."""
    if m.ndim != 1 or g.ndim != 1:
        raise MatrixError("direct_sum expects two vectors")
    if m.size == 0 or g.size == 0:
        raise MatrixError("direct_sum operands must be non-empty")
    return np.concatenate([m, g])


@dataclass(frozen=True)
class ScaledOrthogonalMatrix:
    """Square integer matrix M with M^T M = scale * I, scale > 0.

    The scale equals the squared norm of every column; decode divides by it.
    """

    matrix: np.ndarray
    scale: int

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def check_scaled_orthogonal(m: np.ndarray) -> ScaledOrthogonalMatrix | None:
    """Verify M^T M = k*I by direct exact multiplication.

    Returns the wrapped matrix with its scale k, or None when the identity
    fails.  k = 0 (the zero matrix) is rejected because decode divides by k.
    """
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MatrixError("check_scaled_orthogonal expects a square matrix")
    n = m.shape[0]
    gram = matmul(m.T, m)
    k = gram[0, 0]
    if k == 0:
        return None
    expected = np.zeros((n, n), dtype=object)
    np.fill_diagonal(expected, k)
    if not (gram == expected).all():
        return None
    return ScaledOrthogonalMatrix(matrix=m, scale=int(k))
