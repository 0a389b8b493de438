import numpy as np
import pytest

from choquet.errors import ZeroWeight
from choquet.linalg import direct_sum
from choquet.structure import (
    commutant_basis,
    commutant_dimension,
    decompose_irreducible,
    fingerprint_match,
    finite_shift_matrix,
    shift_moduli_equivalent,
)

from conftest import SEEDS, jordan_plus, haar_unitary, jordan, rand_complex


def brute_commutant_dimension(T):
    # independent route: real 2n^2 x 2n^2 system solved by LAPACK rank
    n = T.shape[0]
    cols = []
    for k in range(n * n):
        for unit in (1.0, 1j):
            X = np.zeros(n * n, dtype=complex)
            X[k] = unit
            X = X.reshape(n, n)
            r = np.concatenate([(X @ T - T @ X).ravel(), (X @ T.conj().T - T.conj().T @ X).ravel()])
            cols.append(np.concatenate([r.real, r.imag]))
    M = np.array(cols).T
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s <= 1e-10 * s[0])) // 2


def test_commutant_examples():
    assert commutant_dimension(jordan()) == 1
    assert commutant_dimension(np.diag([1, 2])) == 2
    assert commutant_dimension(np.array([[5j]])) == 1
    assert commutant_dimension(np.eye(3)) == 9
    assert commutant_dimension(jordan_plus(0.3)) == 2


def test_commutant_basis_commutes():
    T = jordan_plus(0.7)
    for X in commutant_basis(T):
        assert np.linalg.norm(X @ T - T @ X) < 1e-10
        assert np.linalg.norm(X @ T.conj().T - T.conj().T @ X) < 1e-10


@pytest.mark.parametrize("seed", SEEDS)
def test_commutant_dimension_oracle(seed):
    rng = np.random.default_rng(seed)
    A = rand_complex(rng, 2, 2)
    T = direct_sum([A, A, [[rng.standard_normal()]]])
    U = haar_unitary(rng, 5)
    T = U @ T @ U.conj().T
    assert commutant_dimension(T) == brute_commutant_dimension(T) == 5


def test_jordan_plus_decomposition():
    T = jordan_plus(0.3)
    dec = decompose_irreducible(T)
    assert dec.block_dims == [1, 2]
    assert np.allclose(dec.blocks[0], [[0.3]])
    assert fingerprint_match(dec.blocks[1], jordan())
    assert dec.residual(T) < 1e-10


def test_trivial_decompositions():
    dec = decompose_irreducible(jordan())
    assert dec.block_dims == [2] and np.allclose(dec.change_of_basis, np.eye(2))
    dec = decompose_irreducible(np.diag([2, 1]))
    assert dec.block_dims == [1, 1]
    assert [b[0, 0].real for b in dec.blocks] == pytest.approx([1, 2])


@pytest.mark.parametrize("seed", SEEDS)
def test_round_trip_and_irreducible_blocks(seed):
    rng = np.random.default_rng(seed)
    parts = [rand_complex(rng, d, d) for d in rng.integers(1, 4, size=3)]
    U = haar_unitary(rng, sum(p.shape[0] for p in parts))
    T = U @ direct_sum(parts) @ U.conj().T
    dec = decompose_irreducible(T)
    assert sum(dec.block_dims) == T.shape[0]
    assert dec.residual(T) <= 1e-8 * np.linalg.norm(T, 2)
    V = dec.change_of_basis
    assert np.linalg.norm(V.conj().T @ V - np.eye(T.shape[0])) < 1e-10
    assert all(commutant_dimension(b) == 1 for b in dec.blocks)
    assert sorted(dec.block_dims) == sorted(p.shape[0] for p in parts)


@pytest.mark.parametrize("seed", SEEDS)
def test_two_inequivalent_blocks(seed):
    rng = np.random.default_rng(seed)
    T = direct_sum([rand_complex(rng, 2, 2), rand_complex(rng, 3, 3)])
    assert len(decompose_irreducible(T).blocks) == 2


@pytest.mark.parametrize("seed", SEEDS)
def test_commutant_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    T = direct_sum([rand_complex(rng, 2, 2), np.eye(2)])
    U = haar_unitary(rng, 4)
    assert commutant_dimension(T) == commutant_dimension(U @ T @ U.conj().T)


def test_block_order_is_deterministic():
    T = direct_sum([[[2.0]], jordan(), [[1.0]]])
    dec = decompose_irreducible(T)
    assert dec.block_dims == [1, 1, 2]
    assert [dec.blocks[0][0, 0], dec.blocks[1][0, 0]] == pytest.approx([1, 2])


def test_shift_moduli():
    assert shift_moduli_equivalent((1, 2), (-1, 2 * np.exp(1j * np.pi / 3)))
    assert not shift_moduli_equivalent((1, 2), (2, 1))
    assert shift_moduli_equivalent((1, 2j), (1, 2j))
    assert not shift_moduli_equivalent((1,), (1, 1))
    with pytest.raises(ZeroWeight):
        shift_moduli_equivalent((1, 0), (1, 1))


def test_moduli_equivalence_is_unitary_equivalence():
    xi, eta = (1, 2), (-1, 2 * np.exp(1j * np.pi / 3))
    A, B = finite_shift_matrix(xi), finite_shift_matrix(eta)
    assert fingerprint_match(A, B)
    # diagonal unitary implementing the equivalence
    phases = np.cumprod([1] + [e / x for x, e in zip(xi, eta)])
    D = np.diag(phases)
    assert np.allclose(D @ A @ D.conj().T, B)
