"""Irreducibility via the commutant and splitting into irreducible direct summands."""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DecompositionFailure, EmptyInput, NoConvergence, ValidationError, ZeroWeight
from .linalg import MAX_DIM, as_cmatrix, direct_sum, fro, herm_eig

_RETRIES = 8


@dataclass(eq=False)
class BlockDecomposition:
    """U* T U = direct_sum(blocks); every block is irreducible."""

    change_of_basis: np.ndarray
    blocks: list
    block_dims: list

    @property
    def n(self):
        return int(sum(self.block_dims))

    def offsets(self):
        return np.concatenate([[0], np.cumsum(self.block_dims)]).astype(int)

    def residual(self, T):
        U = self.change_of_basis
        return fro(U.conj().T @ T @ U - direct_sum(self.blocks))


def _commutant_system(T):
    # row-major vec: vec(XA - AX) = (I kron A^T - A kron I) vec(X)
    n = T.shape[0]
    eye = np.eye(n)
    rows = [np.kron(eye, A.T) - np.kron(A, eye) for A in (T, T.conj().T)]
    return np.vstack(rows)


def commutant_basis(T, cfg=DEFAULT):
    """Orthonormal basis (as n x n matrices) of {X : XT = TX, XT* = T*X}."""
    T = as_cmatrix(T)
    n = T.shape[0]
    if n > MAX_DIM:
        raise ValidationError(f"dimension {n} exceeds supported size {MAX_DIM}")
    if n == 1:
        return np.ones((1, 1, 1), dtype=complex)
    L = _commutant_system(T)
    try:
        _, sv, Vh = np.linalg.svd(L)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    if sv[0] <= 1e-14:
        null = np.ones(n * n, dtype=bool)
    else:
        null = sv < cfg.eps_eig * sv[0]
        null = np.concatenate([null, np.ones(n * n - len(sv), dtype=bool)])
    return Vh.conj()[null].reshape(-1, n, n)


def commutant_dimension(T, cfg=DEFAULT):
    """Dimension of the commutant of {T, T*}; equals 1 iff T is irreducible."""
    return int(commutant_basis(T, cfg).shape[0])


def _split(T, cfg, rng):
    """Split T along the eigenspaces of a generic Hermitian commutant element."""
    n = T.shape[0]
    basis = commutant_basis(T, cfg)
    if basis.shape[0] == 1:
        return None
    herm = []
    for X in basis:
        herm.append(0.5 * (X + X.conj().T))
        herm.append((X - X.conj().T) / 2j)
    herm = np.array(herm)
    for _ in range(_RETRIES):
        H = np.tensordot(rng.standard_normal(len(herm)), herm, axes=1)
        H = H - np.trace(H).real / n * np.eye(n)
        size = np.linalg.norm(H)
        if size <= 1e-12:
            continue
        w, Q = herm_eig(0.5 * (H + H.conj().T) / size, cfg)
        cuts = np.nonzero(np.diff(w) > 1e-7)[0] + 1
        if len(cuts):
            return np.split(Q, cuts, axis=1)
    raise DecompositionFailure("commutant is non-trivial but no splitting element was found")


def _sort_key(block):
    tr = np.trace(block)
    return (block.shape[0], round(float(tr.real), 12), round(float(tr.imag), 12))


def decompose_irreducible(T, cfg=DEFAULT):
    """Unitary change of basis putting T into a direct sum of irreducible blocks.

    Blocks are ordered by (dimension, Re trace, Im trace).
    """
    T = as_cmatrix(T)
    n = T.shape[0]
    if n > MAX_DIM:
        raise ValidationError(f"dimension {n} exceeds supported size {MAX_DIM}")
    rng = np.random.default_rng(cfg.rng_seed)
    pieces = []
    stack = [np.eye(n, dtype=complex)]
    while stack:
        U = stack.pop()
        block = U.conj().T @ T @ U
        parts = _split(block, cfg, rng)
        if parts is None:
            pieces.append((U, block))
            continue
        if len(parts) < 2:
            raise DecompositionFailure("splitting stalled")
        stack.extend(U @ Q for Q in reversed(parts))
    pieces.sort(key=lambda uc: _sort_key(uc[1]))
    U = np.hstack([u for u, _ in pieces])
    blocks = [b for _, b in pieces]
    dec = BlockDecomposition(U, blocks, [b.shape[0] for b in blocks])
    if dec.residual(T) > 1e-8 * max(fro(T), 1e-14):
        raise DecompositionFailure(
            f"block residual {dec.residual(T):.3e} exceeds tolerance; eps_eig may be mis-set")
    return dec


def shift_moduli_equivalent(xi, eta):
    """True iff the weighted shifts W(xi), W(eta) are unitarily equivalent (|xi| = |eta|)."""
    a = np.asarray(xi, dtype=complex).ravel()
    b = np.asarray(eta, dtype=complex).ravel()
    if len(a) == 0 or len(b) == 0:
        raise EmptyInput("weight lists must be nonempty")
    if np.any(a == 0) or np.any(b == 0):
        raise ZeroWeight("shift weights must be nonzero")
    if len(a) != len(b):
        return False
    ma, mb = np.abs(a), np.abs(b)
    return bool(np.all(np.abs(ma - mb) <= 1e-12 * np.maximum(ma, mb)))


def finite_shift_matrix(weights):
    """The (d+1) x (d+1) shift with subdiagonal xi_1..xi_d."""
    xi = np.asarray(weights, dtype=complex).ravel()
    if len(xi) == 0:
        raise EmptyInput("a finite shift needs at least one weight")
    if np.any(xi == 0):
        raise ZeroWeight("finite shift weights must be nonzero")
    return np.diag(xi, k=-1)


def fingerprint_match(A, B, tol=1e-8):
    """Necessary condition for unitary equivalence: same dimension, spectrum, singular values.

    Incomplete by design; inequivalent matrices can share a fingerprint.
    """
    if A.shape != B.shape:
        return False
    scale = max(1.0, fro(A), fro(B))
    for f in (np.linalg.eigvals, lambda M: np.linalg.eigvalsh(M.conj().T @ M)):
        if not _multiset_close(f(A), f(B), tol * scale):
            return False
    return abs(np.trace(A @ A.conj().T @ A) - np.trace(B @ B.conj().T @ B)) <= tol * scale ** 3


def _multiset_close(a, b, tol):
    left = list(np.asarray(a, dtype=complex))
    for v in np.asarray(b, dtype=complex):
        if not left:
            return False
        d = [abs(v - u) for u in left]
        k = int(np.argmin(d))
        if d[k] > tol:
            return False
        left.pop(k)
    return not left
