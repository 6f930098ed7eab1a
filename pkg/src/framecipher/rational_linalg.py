"""Exact linear algebra over the rationals and integers.

The attack code needs three primitives done without rounding: rank growth
of an integer span, a linear solve, and orthogonal projection off a
subspace.  Integer spans use fraction-free elimination; solves and
projections use `fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


class DependentBasisError(ValueError):
    """A basis handed to a projection or solve was linearly dependent."""


class SingularSystemError(ValueError):
    """The coefficient matrix of an exact solve was singular."""


class IntegerSpan:
    """Incrementally maintained row-echelon form of an integer span.

    add() reduces a vector against the current pivots with cross
    elimination (no fractions) and keeps it when something survives, so
    rank queries and independence checks are exact.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._echelon: list[list[int]] = []  # sorted by pivot column
        self._pivots: list[int] = []
        self.accepted: list[list[int]] = []  # original vectors that grew the rank

    @property
    def rank(self) -> int:
        return len(self._echelon)

    def _reduce(self, vec: Sequence[int]) -> list[int]:
        v = [int(x) for x in vec]
        for row, piv in zip(self._echelon, self._pivots):
            if v[piv]:
                a, b = row[piv], v[piv]
                v = [a * x - b * y for x, y in zip(v, row)]
        return v

    def add(self, vec: Sequence[int]) -> bool:
        """Insert a vector; True iff it increased the rank."""
        if len(vec) != self.dim:
            raise ValueError(f"vector length {len(vec)} != span dimension {self.dim}")
        v = self._reduce(vec)
        if not any(v):
            return False
        g = 0
        for x in v:
            g = gcd(g, abs(x))
        v = [x // g for x in v]
        piv = next(i for i, x in enumerate(v) if x)
        pos = 0
        while pos < len(self._pivots) and self._pivots[pos] < piv:
            pos += 1
        self._echelon.insert(pos, v)
        self._pivots.insert(pos, piv)
        self.accepted.append([int(x) for x in vec])
        return True

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(self._reduce(vec))


def _gauss_jordan(m: list[list[Fraction]], width: int) -> None:
    """Reduce the first `width` columns of an augmented matrix in place."""
    n = len(m)
    for col in range(width):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularSystemError(f"no pivot in column {col}")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [v - f * p for v, p in zip(m[r], m[col])]


def solve_exact(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve the square system a x = b with exact Gaussian elimination."""
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("solve_exact needs a square system")
    m = [[Fraction(v) for v in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    _gauss_jordan(m, n)
    return [row[n] for row in m]


def invert_exact(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse of a square matrix."""
    n = len(a)
    m = [
        [Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(a)
    ]
    _gauss_jordan(m, n)
    return [row[n:] for row in m]


class ExactProjector:
    """Orthogonal projection off span(basis), factored once and reused.

    Solves the Gram system B B^T x = B v exactly, so the residual
    v - B^T x is orthogonal to every basis vector with zero error.  The
    Gram inverse is computed once; each residual is then two matrix-vector
    products.
    """

    def __init__(self, basis: Sequence[Sequence]):
        if not basis:
            raise DependentBasisError("empty basis")
        self.dim = len(basis[0])
        self.basis = []
        span = IntegerSpan(self.dim)
        for vec in basis:
            if len(vec) != self.dim:
                raise ValueError("basis vectors must share one length")
            fracs = [Fraction(x) for x in vec]
            scale = 1
            for f in fracs:
                scale = scale * f.denominator // gcd(scale, f.denominator)
            if not span.add([int(f * scale) for f in fracs]):
                raise DependentBasisError("basis is linearly dependent")
            self.basis.append(fracs)
        gram = [
            [sum(x * y for x, y in zip(u, w)) for w in self.basis] for u in self.basis
        ]
        self._inv_gram = invert_exact(gram)

    def residual(self, v: Sequence) -> list[Fraction]:
        vv = [Fraction(x) for x in v]
        if len(vv) != self.dim:
            raise ValueError(f"vector length {len(vv)} != basis dimension {self.dim}")
        rhs = [sum(x * y for x, y in zip(u, vv)) for u in self.basis]
        coeffs = [
            sum(g * r for g, r in zip(row, rhs) if r) for row in self._inv_gram
        ]
        out = list(vv)
        for c, u in zip(coeffs, self.basis):
            if c:
                out = [o - c * x for o, x in zip(out, u)]
        return out


def project_off_subspace(v: Sequence, basis: Sequence[Sequence]) -> list[Fraction]:
    """Exact residual of v after projecting onto span(basis).

    The basis must be linearly independent (rank-checked); the result has
    exact zero inner product with every basis vector.
    """
    return ExactProjector(basis).residual(v)
