"""Wrong-key distortion analysis.

When an adversary decodes with a guess Mt = M + P instead of the true key
matrix M, the output is wt = (1/kt) Mt^T M w with kt the squared row norm
of the guess.  This module computes wt both directly and through its
per-coordinate decomposition

    wt_j = (k + (P^T M)_jj) / kt * w_j  +  sum_{i != j} (P^T M)_ji / kt * w_i

whose diagonal factor tends to 1 for close guesses and to 0 for far ones,
and checks the operator-norm error bound for tensor-structured guesses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_core import ScaledOrthogonalMatrix, matmul, tensor

NORM_ESTIMATE_TOL = 1e-4  # slack for power-iteration estimates in the bound check


@dataclass(frozen=True)
class PerturbationReport:
    """Direct perturbed decode plus its coefficient decomposition.

    coefficient_diag[j] multiplies w_j; cross_terms[j] is the summed
    contribution of all other coordinates; bound_rhs is filled by the
    tensor bound check when the factor norms are known.
    """

    w_tilde: np.ndarray
    coefficient_diag: np.ndarray
    cross_terms: np.ndarray
    scale: int
    perturbed_scale: int
    input_vector: np.ndarray = None  # float copy of w, so reconstruction is self-contained
    bound_rhs: float | None = None

    def reconstructed(self) -> np.ndarray:
        """Reassemble wt from the coefficient decomposition."""
        return self.coefficient_diag * self.input_vector + self.cross_terms


def _row_norms_sq(m: np.ndarray) -> list[int]:
    return [sum(int(v) * int(v) for v in row) for row in m]


def perturbed_decode(
    m: ScaledOrthogonalMatrix, p: np.ndarray, w
) -> PerturbationReport:
    """Decode w's ciphertext with the perturbed key M + P, two ways.

    P must respect the key structure: the perturbed matrix needs equal row
    norms (that common value is kt).  The direct route evaluates
    (1/kt) (M+P)^T (M w); the formula route assembles the same vector from
    the diagonal coefficients and cross-term sums, and the two agree to
    float accuracy.
    """
    if p.shape != m.matrix.shape:
        raise ValueError(f"perturbation shape {p.shape} != key shape {m.matrix.shape}")
    w = np.array([int(v) for v in w], dtype=object)
    if w.shape[0] != m.n:
        raise ValueError(f"vector length {w.shape[0]} != matrix size {m.n}")

    mt = m.matrix + p
    norms = _row_norms_sq(mt)
    k_tilde = norms[0]
    if any(nm != k_tilde for nm in norms):
        raise ValueError("perturbation does not respect the key structure (unequal row norms)")
    if k_tilde == 0:
        raise ValueError("perturbed matrix is zero (kt = 0)")
    p_norms = _row_norms_sq(p)
    if any(nm != p_norms[0] for nm in p_norms):
        raise ValueError("perturbation does not respect the key structure (unequal row norms)")

    k = m.scale
    # direct route: exact integer products, one float division at the end
    mw = matmul(m.matrix, w)
    w_tilde = matmul(mt.T, mw).astype(float) / float(k_tilde)

    # formula route: diagonal and cross coefficients from P^T M
    ptm = matmul(p.T, m.matrix)
    n = m.n
    diag = np.array([float(k + ptm[j, j]) / float(k_tilde) for j in range(n)])
    cross = np.empty(n)
    for j in range(n):
        s = sum(int(ptm[j, i]) * int(w[i]) for i in range(n) if i != j)
        cross[j] = float(s) / float(k_tilde)

    return PerturbationReport(
        w_tilde=w_tilde,
        coefficient_diag=diag,
        cross_terms=cross,
        scale=k,
        perturbed_scale=int(k_tilde),
        input_vector=w.astype(float),
    )


def operator_norm(a, rel_tol: float = 1e-6, max_iter: int = 20000) -> float:
    """Largest singular value by power iteration on A^T A."""
    a = np.asarray(a, dtype=float)
    if not a.any():
        return 0.0
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(a.shape[1])
    v /= np.linalg.norm(v)
    b = a.T @ a
    sigma = 0.0
    for _ in range(max_iter):
        u = b @ v
        nu = np.linalg.norm(u)
        if nu == 0.0:
            return 0.0
        v = u / nu
        new_sigma = float(np.sqrt(nu))
        if sigma and abs(new_sigma - sigma) <= rel_tol * new_sigma:
            return new_sigma
        sigma = new_sigma
    return sigma


def tensor_error_bound(
    factors: tuple[np.ndarray, np.ndarray, np.ndarray],
    perturbations: tuple[np.ndarray, np.ndarray, np.ndarray],
) -> float:
    """The coefficient (3 g^2 b + 3 g b^2 + b^3) for a three-factor guess.

    g is the largest factor operator norm, b the largest perturbation
    operator norm; the expansion of the perturbed tensor minus the true
    one has three one-perturbation terms, three two-perturbation terms
    and one cubic term.
    """
    g = max(operator_norm(f) for f in factors)
    b = max(operator_norm(q) for q in perturbations)
    return 3 * g * g * b + 3 * g * b * b + b**3


def perturbation_bound_check(
    factors: tuple[np.ndarray, np.ndarray, np.ndarray],
    perturbations: tuple[np.ndarray, np.ndarray, np.ndarray],
    w,
) -> bool:
    """Check || M^T M w - Mt^T M w ||  <=  (3 g^2 b + 3 g b^2 + b^3) ||M w||.

    M is the tensor product of the three factors and Mt the tensor product
    of the perturbed factors.  The inequality always holds mathematically
    (triangle inequality over the seven perturbation terms), so the check
    allows only the norm-estimation slack.
    """
    if len(factors) != 3 or len(perturbations) != 3:
        raise ValueError("the bound is stated for exactly three factors")
    m = tensor(tensor(factors[0], factors[1]), factors[2])
    pf = [f + q for f, q in zip(factors, perturbations)]
    mt = tensor(tensor(pf[0], pf[1]), pf[2])
    w = np.array([int(v) for v in w], dtype=object)
    mw = matmul(m, w)
    lhs_vec = (matmul(m.T, mw) - matmul(mt.T, mw)).astype(float)
    lhs = float(np.linalg.norm(lhs_vec))
    rhs = tensor_error_bound(factors, perturbations) * float(
        np.linalg.norm(mw.astype(float))
    )
    return lhs <= rhs * (1 + NORM_ESTIMATE_TOL)
