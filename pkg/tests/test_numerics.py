import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcrm_ia.errors import ContractViolation, DegenerateInput, NumericalError
from rcrm_ia.numerics import (
    as_complex_matrix,
    blkdiag,
    eigh_hermitian_part,
    herm_eig,
    internal_rank,
    logdet_hpd,
    min_eig_herm,
    nuclear_norm,
    orth_complement,
    pinv,
    projector_distance,
    qr_orthonormalize,
    rank_tol,
    singular_values,
    smallest_eigvecs,
    svd,
    svt,
)
from tests.helpers import crandn

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=6)


def test_as_complex_matrix_rejects_non_matrices():
    with pytest.raises(ContractViolation):
        as_complex_matrix(np.zeros(3))
    with pytest.raises(ContractViolation):
        as_complex_matrix([[1.0, np.nan]])


def test_as_complex_matrix_allows_empty_columns():
    assert as_complex_matrix(np.zeros((2, 0))).shape == (2, 0)


@given(seeds, dims, dims)
def test_svd_reconstructs(seed, r, c):
    M = crandn(np.random.default_rng(seed), r, c)
    left, s, right = svd(M)
    assert np.all(np.diff(s) <= 1e-12)
    np.testing.assert_allclose(left @ np.diag(s) @ right.conj().T, M, atol=1e-10)


def test_svd_of_empty_matrix():
    left, s, right = svd(np.zeros((3, 0)))
    assert s.size == 0 and left.shape == (3, 0) and right.shape == (0, 0)
    assert nuclear_norm(np.zeros((3, 0))) == 0.0
    assert rank_tol(np.zeros((3, 0)), 1e-6) == 0


def test_herm_eig_descending_and_checked():
    A = np.diag([1.0, 3.0, 2.0]).astype(complex)
    w, Q = herm_eig(A)
    np.testing.assert_allclose(w, [3.0, 2.0, 1.0])
    np.testing.assert_allclose(Q @ np.diag(w) @ Q.conj().T, A, atol=1e-12)
    assert min_eig_herm(A) == pytest.approx(1.0)
    with pytest.raises(ContractViolation):
        herm_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ContractViolation):
        herm_eig(np.ones((2, 3)))


def test_smallest_eigvecs_span_the_quiet_subspace():
    A = np.diag([5.0, 0.1, 3.0, 0.2]).astype(complex)
    Q = smallest_eigvecs(A, 2)
    np.testing.assert_allclose(np.abs(Q[[1, 3], :]).sum(axis=0), [1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(2), atol=1e-12)


@given(seeds, st.integers(min_value=1, max_value=4))
def test_qr_orthonormalize_keeps_column_space(seed, d):
    M = crandn(np.random.default_rng(seed), 6, d)
    Q = qr_orthonormalize(M)
    np.testing.assert_allclose(Q.conj().T @ Q, np.eye(d), atol=1e-10)
    assert projector_distance(Q, M) < 1e-8


def test_qr_orthonormalize_rejects_degenerate_input():
    with pytest.raises(DegenerateInput):
        qr_orthonormalize(np.ones((4, 2)))
    with pytest.raises(DegenerateInput):
        qr_orthonormalize(np.ones((2, 3)))


def test_rank_tol_uses_strict_threshold():
    M = np.diag([1.0, 1e-7, 0.0])
    assert rank_tol(M, 1e-6) == 1
    assert rank_tol(M, 1e-8) == 2
    assert internal_rank(M) == 2
    with pytest.raises(ContractViolation):
        rank_tol(M, 0.0)


@given(seeds)
def test_norm_ordering(seed):
    M = crandn(np.random.default_rng(seed), 4, 5)
    s = singular_values(M)
    assert nuclear_norm(M) >= np.linalg.norm(M) - 1e-12 >= s[0] - 2e-12


def test_nuclear_equals_frobenius_for_rank_one():
    rng = np.random.default_rng(3)
    M = np.outer(crandn(rng, 4), crandn(rng, 3))
    assert nuclear_norm(M) == pytest.approx(np.linalg.norm(M), rel=1e-12)


def test_blockdiag_nuclear_additivity():
    rng = np.random.default_rng(11)
    for _ in range(100):
        K = rng.integers(1, 5)
        blocks = [crandn(rng, rng.integers(1, 4), rng.integers(0, 7)) for _ in range(K)]
        total = sum(nuclear_norm(B) for B in blocks)
        assert nuclear_norm(blkdiag(*blocks)) == pytest.approx(total, rel=1e-9, abs=1e-12)


@given(seeds)
def test_rank_invariant_under_right_multiplication(seed):
    rng = np.random.default_rng(seed)
    M = crandn(rng, 5, 2) @ crandn(rng, 2, 4)
    T = np.linalg.qr(crandn(rng, 4, 4))[0] @ np.diag([1.0, 2.0, 0.5, 1.5])
    assert rank_tol(M @ T, 1e-6) == rank_tol(M, 1e-6) == 2


def test_svt_shrinks_singular_values():
    M = np.diag([3.0, 1.0, 0.5]).astype(complex)
    X, s = svt(M, 0.75)
    np.testing.assert_allclose(s, [2.25, 0.25, 0.0])
    np.testing.assert_allclose(X, np.diag([2.25, 0.25, 0.0]), atol=1e-12)
    Z, _ = svt(M, 0.0)
    np.testing.assert_allclose(Z, M, atol=1e-12)


def test_logdet_hpd_matches_slogdet(rng):
    A = crandn(rng, 4, 4)
    M = A @ A.conj().T + np.eye(4)
    assert logdet_hpd(M) == pytest.approx(np.linalg.slogdet(M)[1], rel=1e-12)
    with pytest.raises(NumericalError):
        logdet_hpd(-np.eye(3))


def test_orth_complement(rng):
    Q = qr_orthonormalize(crandn(rng, 5, 2))
    C = orth_complement(Q)
    assert C.shape == (5, 3)
    np.testing.assert_allclose(Q.conj().T @ C, 0, atol=1e-12)
    np.testing.assert_allclose(orth_complement(np.zeros((3, 0))), np.eye(3))


def test_lapack_failures_become_numerical_errors(monkeypatch):
    def fail(*args, **kwargs):
        raise np.linalg.LinAlgError("did not converge")

    monkeypatch.setattr(np.linalg, "eigh", fail)
    monkeypatch.setattr(np.linalg, "pinv", fail)
    with pytest.raises(NumericalError) as info:
        eigh_hermitian_part(np.eye(2))
    assert info.value.shape == (2, 2)
    with pytest.raises(NumericalError):
        pinv(np.ones((3, 2)))
