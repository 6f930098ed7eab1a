"""Factories for scaled-orthogonal matrices.

Covers the four construction families the cipher schemes draw from:
signed-indeterminate square arrays (orders 2, 4, 8), Sylvester +/-1
matrices, the doubling ("blow-up") step, and the orthonormal DCT matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_core import MatrixError, ScaledOrthogonalMatrix, matmul

# Each cell is (sign, value_index).  Every row and column of a pattern
# carries each index exactly once, and rows/columns are formally orthogonal
# whatever values are substituted (the test suite checks this symbolically).

_PATTERN_2 = (
    ((1, 0), (1, 1)),
    ((-1, 1), (1, 0)),
)

# Quaternion-multiplication pattern; the top-left quadrant of the order-8 one.
_PATTERN_4 = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((-1, 1), (1, 0), (1, 3), (-1, 2)),
    ((-1, 2), (-1, 3), (1, 0), (1, 1)),
    ((-1, 3), (1, 2), (-1, 1), (1, 0)),
)

_PATTERN_8 = (
    ((1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7)),
    ((-1, 1), (1, 0), (1, 3), (-1, 2), (1, 5), (-1, 4), (-1, 7), (1, 6)),
    ((-1, 2), (-1, 3), (1, 0), (1, 1), (1, 6), (1, 7), (-1, 4), (-1, 5)),
    ((-1, 3), (1, 2), (-1, 1), (1, 0), (1, 7), (-1, 6), (1, 5), (-1, 4)),
    ((-1, 4), (-1, 5), (-1, 6), (-1, 7), (1, 0), (1, 1), (1, 2), (1, 3)),
    ((-1, 5), (1, 4), (-1, 7), (1, 6), (-1, 1), (1, 0), (-1, 3), (1, 2)),
    ((-1, 6), (1, 7), (1, 4), (-1, 5), (-1, 2), (1, 3), (1, 0), (-1, 1)),
    ((-1, 7), (-1, 6), (1, 5), (1, 4), (-1, 3), (-1, 2), (1, 1), (1, 0)),
)

ARRAY_PATTERNS = {2: _PATTERN_2, 4: _PATTERN_4, 8: _PATTERN_8}

ARRAY_ORDERS = tuple(sorted(ARRAY_PATTERNS))

DEFAULT_SYLVESTER_CAP = 2**10


@dataclass(frozen=True)
class HadamardArrayKey:
    """Atomic key material: an array order plus its indeterminate values."""

    order: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.order not in ARRAY_PATTERNS:
            raise ValueError(f"array order must be one of {ARRAY_ORDERS}, got {self.order}")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != self.order:
            raise ValueError(f"order-{self.order} array needs {self.order} values")
        if not any(self.values):
            raise ValueError("array values must not all be zero")


def array_pattern(order: int):
    """The (sign, value_index) grid for one array order."""
    try:
        return ARRAY_PATTERNS[order]
    except KeyError:
        raise ValueError(f"array order must be one of {ARRAY_ORDERS}, got {order}") from None


def instantiate_array(key: HadamardArrayKey) -> ScaledOrthogonalMatrix:
    """Substitute the key values into the array pattern.

    The result satisfies M^T M = k*I with k the sum of squared values.
    """
    pattern = array_pattern(key.order)
    entries = np.array(
        [[sign * key.values[idx] for sign, idx in row] for row in pattern],
        dtype=object,
    )
    scale = sum(v * v for v in key.values)
    return ScaledOrthogonalMatrix(matrix=entries, scale=scale)


def sylvester_hadamard(p: int, size_cap: int = DEFAULT_SYLVESTER_CAP) -> np.ndarray:
    """The +/-1 matrix of size 2**p from the doubling recursion.

    H_{2n} = [[H_n, H_n], [H_n, -H_n]]; satisfies H^T H = 2**p * I.
    """
    if p < 0:
        raise ValueError("exponent must be >= 0")
    if 2**p > size_cap:
        raise ValueError(f"size 2**{p} exceeds the cap {size_cap}")
    h = np.array([[1]], dtype=object)
    step = np.array([[1, 1], [1, -1]], dtype=object)
    for _ in range(p):
        h = np.kron(step, h)
    return h


def blow_up(a: ScaledOrthogonalMatrix, m: ScaledOrthogonalMatrix) -> ScaledOrthogonalMatrix:
    """Doubling step S = [[A, MA], [-M^T A, A]] for same-size inputs.

    Scales multiply as scale(S) = scale(A) * (1 + scale(M)); the property
    tests confirm this against direct multiplication, so builders may rely
    on it without re-checking.
    """
    if a.n != m.n:
        raise MatrixError(f"blow_up needs equal sizes, got {a.n} and {m.n}")
    ma = matmul(m.matrix, a.matrix)
    mta = matmul(m.matrix.T, a.matrix)
    s = np.block([[a.matrix, ma], [-mta, a.matrix]])
    return ScaledOrthogonalMatrix(matrix=s, scale=a.scale * (1 + m.scale))


def dct_matrix(size: int) -> np.ndarray:
    """Orthonormal cosine-transform matrix (float).

    Entry (k, n) = lam_k * sqrt(2/size) * cos(k*pi*(n + 1/2)/size) with
    lam_0 = 1/sqrt(2) and lam_k = 1 otherwise; C^T C = I to ~1e-15.
    """
    if size < 1:
        raise ValueError("size must be >= 1")
    k = np.arange(size)[:, None]
    n = np.arange(size)[None, :]
    c = np.sqrt(2.0 / size) * np.cos(k * np.pi * (n + 0.5) / size)
    c[0, :] /= np.sqrt(2.0)
    return c
