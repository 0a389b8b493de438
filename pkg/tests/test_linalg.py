import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import polynomial as P

from choquet.config import ToleranceConfig
from choquet.errors import EmptyInput, NotHermitian, ValidationError
from choquet.linalg import (
    direct_sum,
    eigenvalues,
    herm_eig,
    herm_top_eigenvalues,
    is_normal,
    is_positive_semidefinite,
    op_norm,
    self_commutator,
)

from conftest import SEEDS, jordan_plus, haar_unitary, jordan, rand_complex, rand_hermitian


def test_herm_eig_diagonal():
    w, V = herm_eig(np.diag([2.0, 1.0]))
    assert np.allclose(w, [1, 2])
    assert np.allclose(np.abs(V), [[0, 1], [1, 0]])


def test_herm_eig_swap():
    w, V = herm_eig(np.array([[0, 1], [1, 0]]))
    assert np.allclose(w, [-1, 1])
    assert abs(abs(np.vdot(V[:, 0], [1, -1])) / np.sqrt(2) - 1) < 1e-12
    assert abs(abs(np.vdot(V[:, 1], [1, 1])) / np.sqrt(2) - 1) < 1e-12


def test_herm_eig_complex_entries():
    # characteristic polynomial (1-x)^2 - 1 = x(x-2)
    w, _ = herm_eig(np.array([[1, 1j], [-1j, 1]]))
    assert np.allclose(w, [0, 2], atol=1e-14)


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        herm_eig(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("seed", SEEDS)
def test_reconstruction(seed):
    rng = np.random.default_rng(seed)
    for n in (1, 2, 5, 9, 16):
        H = rand_hermitian(rng, n)
        w, Q = herm_eig(H)
        assert np.all(np.diff(w) >= 0)
        assert np.linalg.norm(H - (Q * w) @ Q.conj().T) <= 1e-9 * np.linalg.norm(H)
        assert np.linalg.norm(Q.conj().T @ Q - np.eye(n)) <= 1e-10
        assert np.allclose(w, np.linalg.eigvalsh(H), atol=1e-12 * np.linalg.norm(H))


@pytest.mark.parametrize("seed", SEEDS)
def test_top_eigenvalue_route(seed):
    rng = np.random.default_rng(seed)
    for n in (2, 7, 30):
        H = np.array([rand_hermitian(rng, n) for _ in range(4)])
        ref = np.linalg.eigvalsh(H)[:, -1]
        assert np.allclose(herm_top_eigenvalues(H), ref, atol=1e-13 * np.abs(ref).max())


def test_eigenvalues_examples():
    assert np.allclose(eigenvalues(jordan_plus(0.7)), [0, 0, 0.7], atol=1e-7)
    assert np.allclose(eigenvalues(np.array([[0, 1], [-1, 0]])), [-1j, 1j])
    # companion matrix of z^3 - 1 against a polynomial root finder
    C = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=complex)
    roots = P.polyroots([-1, 0, 0, 1])
    ev = eigenvalues(C)
    assert all(np.abs(ev - r).min() < 1e-10 for r in roots)


def test_eigenvalues_size_limit():
    with pytest.raises(ValidationError):
        eigenvalues(np.eye(65))


@pytest.mark.parametrize("seed", SEEDS)
def test_spectrum_invariance(seed):
    rng = np.random.default_rng(seed)
    A = rand_complex(rng, 6, 6)
    U = haar_unitary(rng, 6)
    a, b = eigenvalues(A), eigenvalues(U @ A @ U.conj().T)
    assert all(np.abs(b - z).min() < 1e-8 for z in a)


def test_op_norm_examples():
    rng = np.random.default_rng(7)
    assert abs(op_norm(jordan()) - 1) < 1e-12
    assert abs(op_norm(haar_unitary(rng, 5)) - 1) < 1e-12
    assert abs(op_norm(np.diag([3, -4j])) - 4) < 1e-12


@pytest.mark.parametrize("seed", SEEDS)
def test_op_norm_submultiplicative(seed):
    rng = np.random.default_rng(seed)
    A, B = rand_complex(rng, 5, 5), rand_complex(rng, 5, 5)
    assert op_norm(A @ B) <= op_norm(A) * op_norm(B) + 1e-9
    assert abs(op_norm(A) - np.linalg.norm(A, 2)) <= 1e-10 * np.linalg.norm(A, 2)


def test_self_commutator_examples():
    assert np.allclose(self_commutator(np.diag([1, 1j])), 0)
    assert np.allclose(self_commutator(jordan()), np.diag([-1, 1]))
    S = np.diag([1.0, 1.0], k=-1)
    assert np.allclose(self_commutator(S), np.diag([1, 0, -1]))
    C = self_commutator(rand_complex(np.random.default_rng(0), 4, 4))
    assert np.array_equal(C, C.conj().T)


@pytest.mark.parametrize("seed", SEEDS)
def test_self_commutator_normal(seed):
    rng = np.random.default_rng(seed)
    U = haar_unitary(rng, 6)
    N = U @ np.diag(rand_complex(rng, 6)) @ U.conj().T
    assert op_norm(self_commutator(N)) <= 1e-10 * np.linalg.norm(N, 2) ** 2 + 1e-14
    assert is_normal(N)


def test_positive_semidefinite():
    assert is_positive_semidefinite(np.diag([0, 1]))
    assert not is_positive_semidefinite(np.diag([-1, 1]))
    assert is_positive_semidefinite(np.zeros((3, 3)))


def test_direct_sum():
    lam = 0.25
    assert np.array_equal(direct_sum([jordan(), [[lam]]]), jordan_plus(lam))
    assert np.array_equal(direct_sum([[[2j]]]), [[2j]])
    assert np.array_equal(direct_sum([[[1]], [[2]]]), np.diag([1, 2]))
    with pytest.raises(EmptyInput):
        direct_sum([])


def test_config_validation():
    with pytest.raises(ValueError):
        ToleranceConfig(angle_count=8)
    with pytest.raises(ValueError):
        ToleranceConfig(eps_hull=0)
    with pytest.raises(ValueError):
        ToleranceConfig(rng_seed=-1)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_eig_matches_lapack(n, seed):
    H = rand_hermitian(np.random.default_rng(seed), n)
    w, _ = herm_eig(H)
    assert np.allclose(w, np.linalg.eigvalsh(H), atol=1e-11 * max(1, np.linalg.norm(H)))
