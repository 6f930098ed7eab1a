"""Frame-theoretic verification layer.

A frame is presented through its analysis matrix: row i is frame vector i,
so a matrix of shape M x N holds M vectors for an N-dimensional space.
Integer and Fraction entries are checked exactly; float entries (the DCT
path) are checked to a 1e-12 tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_core import MatrixError, matmul

FLOAT_TOL = 1e-12


@dataclass(frozen=True)
class FrameMatrixView:
    """M x N analysis matrix whose rows are the frame vectors."""

    analysis_matrix: np.ndarray

    def __post_init__(self):
        a = self.analysis_matrix
        if a.ndim != 2:
            raise MatrixError("analysis matrix must be 2-D")
        if a.shape[0] < a.shape[1]:
            raise MatrixError("a frame needs at least dim-many vectors (rows >= cols)")
        for i in range(a.shape[0]):
            if not any(v != 0 for v in a[i]):
                raise MatrixError(f"zero frame vector at row {i}")

    @property
    def num_vectors(self) -> int:
        return self.analysis_matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.analysis_matrix.shape[1]


def _is_exact(a: np.ndarray) -> bool:
    return a.dtype == object


def _gram(a: np.ndarray) -> np.ndarray:
    if _is_exact(a):
        return matmul(a.T, a)
    return a.T @ a


def is_parseval(f: FrameMatrixView) -> bool:
    """True iff the analysis matrix has orthonormal columns (Theta^T Theta = I)."""
    a = f.analysis_matrix
    gram = _gram(a)
    if _is_exact(a):
        eye = np.zeros((f.dim, f.dim), dtype=object)
        np.fill_diagonal(eye, 1)
        return bool((gram == eye).all())
    return bool(np.max(np.abs(gram - np.eye(f.dim))) <= FLOAT_TOL)


def scaled_parseval_scale(f: FrameMatrixView):
    """The constant K with Theta^T Theta = K*I, checked exactly; None if absent.

    Integer-valued frames produced by the cipher builders are K-scaled
    Parseval frames; this is the exact-arithmetic form of the Parseval
    check, with no normalization to floats.
    """
    a = f.analysis_matrix
    if not _is_exact(a):
        raise MatrixError("scaled Parseval check is exact-only; use is_parseval for floats")
    gram = matmul(a.T, a)
    k = gram[0, 0]
    if k == 0:
        return None
    for i in range(f.dim):
        for j in range(f.dim):
            if gram[i, j] != (k if i == j else 0):
                return None
    return k


def are_orthogonal_frames(fx: FrameMatrixView, fy: FrameMatrixView) -> bool:
    """True iff the analysis operators have orthogonal ranges (Q^T P = 0)."""
    p = fx.analysis_matrix
    q = fy.analysis_matrix
    if p.shape[0] != q.shape[0]:
        raise MatrixError(
            f"frames must have the same number of vectors, got {p.shape[0]} and {q.shape[0]}"
        )
    if _is_exact(p) and _is_exact(q):
        cross = matmul(q.T, p)
        return bool((cross == np.zeros(cross.shape, dtype=object)).all())
    cross = np.asarray(q, dtype=float).T @ np.asarray(p, dtype=float)
    return bool(np.max(np.abs(cross)) <= FLOAT_TOL)


def redundancy_bound_ok(fx: FrameMatrixView, fy: FrameMatrixView) -> bool:
    """Check M >= dim(H) + dim(K) for a pair of orthogonal frames.

    Every builder in this toolkit produces the equality case: the two
    halves of an n x n matrix carry n/2 + n/2 = n columns.
    """
    if fx.num_vectors != fy.num_vectors:
        raise MatrixError("orthogonal frames must share their vector count")
    return fx.num_vectors >= fx.dim + fy.dim


def split_columns(matrix: np.ndarray) -> tuple[FrameMatrixView, FrameMatrixView]:
    """Column-split an even-width matrix into (message band, noise band) views."""
    cols = matrix.shape[1]
    if cols % 2:
        raise MatrixError("column split needs an even number of columns")
    half = cols // 2
    return (
        FrameMatrixView(matrix[:, :half]),
        FrameMatrixView(matrix[:, half:]),
    )
