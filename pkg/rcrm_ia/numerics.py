"""
Dense complex linear algebra used by every other module.

All functions are pure: they never modify their inputs and return fresh
``complex128`` / ``float64`` arrays. Matrices are plain 2-D numpy arrays.
"""

import logging
from typing import Tuple

import numpy as np
import scipy.linalg as sla

from rcrm_ia.errors import ContractViolation, DegenerateInput, NumericalError

logger = logging.getLogger(__name__)

# Relative threshold below which singular values are numerically zero
# inside the library. The experiment-facing threshold is dim_threshold.
INTERNAL_RANK_RTOL = 1e-12
HERMITIAN_RTOL = 1e-9


def as_complex_matrix(M) -> np.ndarray:
    """Validate and convert ``M`` to a finite 2-D complex128 array.

    Empty dimensions are allowed (a receiver with no interferers has a d x 0
    interference matrix).
    """
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2:
        raise ContractViolation(f"expected a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ContractViolation(f"matrix of shape {A.shape} has non-finite entries")
    return A


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def svd(M) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin singular value decomposition.

    Returns:
        (left, singular_values, right) with ``M = left @ diag(s) @ right^H``,
        singular values sorted descending.

    Raises:
        NumericalError: if LAPACK fails to converge.
    """
    A = as_complex_matrix(M)
    if A.size == 0:
        k = min(A.shape)
        return (np.zeros((A.shape[0], k), complex), np.zeros(k),
                np.zeros((A.shape[1], k), complex))
    try:
        left, s, right_h = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}", shape=A.shape) from exc
    return left, s, right_h.conj().T


def singular_values(M) -> np.ndarray:
    A = as_complex_matrix(M)
    if A.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}", shape=A.shape) from exc


def _checked_hermitian(M) -> np.ndarray:
    A = as_complex_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {A.shape}")
    scale = np.linalg.norm(A, 'fro')
    if np.linalg.norm(A - A.conj().T, 'fro') > HERMITIAN_RTOL * max(scale, np.finfo(float).tiny):
        raise ContractViolation("matrix is not Hermitian within tolerance")
    return hermitian_part(A)


def herm_eig(M) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized after the Hermitian check.
    """
    A = _checked_hermitian(M)
    try:
        w, Q = sla.eigh(A)
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}", shape=A.shape) from exc
    return w[::-1].copy(), Q[:, ::-1].copy()


def min_eig_herm(M) -> float:
    w, _ = herm_eig(M)
    return float(w[-1])


def eigh_hermitian_part(M) -> Tuple[np.ndarray, np.ndarray]:
    """Ascending eigendecomposition of the Hermitian part of ``M``, no symmetry check."""
    A = hermitian_part(as_complex_matrix(M))
    try:
        return np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}", shape=A.shape) from exc


def logdet_hpd(M) -> float:
    """log det of a Hermitian positive definite matrix via Cholesky."""
    A = as_complex_matrix(M)
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"matrix is not positive definite: {exc}", shape=A.shape) from exc
    return 2.0 * float(np.sum(np.log(np.real(np.diag(L)))))


def pinv(M: np.ndarray) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a real or complex matrix."""
    try:
        return np.linalg.pinv(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}", shape=M.shape) from exc


def smallest_eigvecs(M, n: int) -> np.ndarray:
    """Orthonormal eigenvectors of the ``n`` smallest eigenvalues of ``M``."""
    w, Q = herm_eig(M)
    return Q[:, ::-1][:, :n].copy()


def qr_orthonormalize(M) -> np.ndarray:
    """Orthonormal basis of the column space of a full-column-rank matrix.

    Raises:
        DegenerateInput: if ``cols > rows`` or the smallest singular value is
            not above ``1e-12`` times the largest.
    """
    A = as_complex_matrix(M)
    rows, cols = A.shape
    if cols > rows:
        raise DegenerateInput(f"cannot orthonormalize {cols} columns in dimension {rows}")
    s = singular_values(A)
    if s.size == 0 or s[0] == 0 or s[-1] <= INTERNAL_RANK_RTOL * s[0]:
        raise DegenerateInput(f"matrix of shape {A.shape} is rank deficient")
    try:
        Q, _ = sla.qr(A, mode='economic')
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise NumericalError(f"QR factorization failed: {exc}", shape=A.shape) from exc
    return Q


def orth_complement(Q) -> np.ndarray:
    """Orthonormal basis of the complement of the span of the orthonormal columns ``Q``."""
    A = as_complex_matrix(Q)
    if A.shape[1] == 0:
        return np.eye(A.shape[0], dtype=np.complex128)
    try:
        return sla.null_space(A.conj().T)
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise NumericalError(f"SVD did not converge: {exc}", shape=A.shape) from exc


def rank_tol(M, tau: float) -> int:
    """Number of singular values strictly greater than ``tau``."""
    if not tau > 0:
        raise ContractViolation(f"rank threshold must be positive, got {tau}")
    return int(np.count_nonzero(singular_values(M) > tau))


def internal_rank(M) -> int:
    """Rank with the library's relative zero threshold."""
    s = singular_values(M)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > INTERNAL_RANK_RTOL * s[0]))


def nuclear_norm(M) -> float:
    return float(np.sum(singular_values(M)))


def blkdiag(*blocks) -> np.ndarray:
    return sla.block_diag(*[as_complex_matrix(b) for b in blocks]).astype(np.complex128)


def projector(M) -> np.ndarray:
    """Orthogonal projector onto the column space of ``M``."""
    Q = qr_orthonormalize(M)
    return Q @ Q.conj().T


def projector_distance(A, B) -> float:
    """Frobenius distance between the projectors onto two column spaces."""
    return float(np.linalg.norm(projector(A) - projector(B), 'fro'))


def svt(M: np.ndarray, threshold: float) -> Tuple[np.ndarray, np.ndarray]:
    """Singular value thresholding, the proximal operator of ``threshold * ||.||_*``.

    Returns:
        The shrunk matrix and its singular values.
    """
    if M.size == 0:
        return M.copy(), np.zeros(0)
    left, s, right = svd(M)
    shrunk = np.maximum(s - threshold, 0.0)
    keep = shrunk > 0
    return (left[:, keep] * shrunk[keep]) @ right[:, keep].conj().T, shrunk
