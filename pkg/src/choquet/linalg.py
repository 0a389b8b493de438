"""Dense complex matrix substrate: Hermitian Jacobi eigensolver, spectra, norms."""

import numpy as np

from .config import DEFAULT
from .errors import EmptyInput, NoConvergence, NotHermitian, ValidationError

MAX_DIM = 64
ABS_FLOOR = 1e-14
_MAX_SWEEPS = 60


def as_cmatrix(A, name="matrix"):
    """Return `A` as a square, finite complex128 array (copy-free when possible)."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValidationError(f"{name} must be a nonempty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name} has non-finite entries")
    return M


def fro(A):
    return float(np.linalg.norm(A))


def tol_scaled(eps, size):
    """Relative tolerance with the absolute floor used throughout."""
    return max(eps * size, ABS_FLOOR)


def is_hermitian(H, cfg=DEFAULT):
    H = np.asarray(H)
    return fro(H - H.conj().T) <= tol_scaled(cfg.eps_herm, fro(H))


def _check_hermitian_batch(Hs, eps):
    skew = np.linalg.norm(Hs - np.conj(np.swapaxes(Hs, -1, -2)), axis=(-2, -1))
    size = np.linalg.norm(Hs, axis=(-2, -1))
    bad = skew > np.maximum(eps * size, ABS_FLOOR)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise NotHermitian(f"matrix {k} deviates from Hermitian by {skew[k]:.3e}")


def _jacobi(A, tol):
    # cyclic sweeps over (p, q); every matrix in the batch sees the same pivot order
    nb, n, _ = A.shape
    V = np.broadcast_to(np.eye(n, dtype=np.complex128), A.shape).copy()
    scale = np.linalg.norm(A, axis=(1, 2))
    offmask = ~np.eye(n, dtype=bool)
    for _ in range(_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(A[:, offmask]) ** 2, axis=1))
        if np.all(off <= tol * scale):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[:, p, q]
                b = np.abs(apq)
                # entries this small relative to ||A|| are left in place
                active = b > 1e-30 * scale
                if not np.any(active):
                    continue
                bs = np.where(active, b, 1.0)
                phase = np.where(active, apq.real / bs + 1j * (apq.imag / bs), 1.0)
                theta = (A[:, q, q].real - A[:, p, p].real) / (2.0 * bs)
                big = np.abs(theta) > 1e150
                th = np.where(big, 1.0, theta)
                t = np.where(
                    big, 0.5 / np.where(big, theta, 1.0),
                    np.copysign(1.0, th) / (np.abs(th) + np.sqrt(th * th + 1.0)),
                )
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                sc = (s * np.conj(phase))[:, None]
                cc = (c * np.conj(phase))[:, None]
                cr, sr = c[:, None], s[:, None]

                Ap, Aq = A[:, :, p].copy(), A[:, :, q].copy()
                A[:, :, p] = cr * Ap - sc * Aq
                A[:, :, q] = sr * Ap + cc * Aq
                Rp, Rq = A[:, p, :].copy(), A[:, q, :].copy()
                A[:, p, :] = cr * Rp - (s * phase)[:, None] * Rq
                A[:, q, :] = sr * Rp + (c * phase)[:, None] * Rq
                A[:, p, q] = 0.0
                A[:, q, p] = 0.0
                A[:, p, p] = A[:, p, p].real
                A[:, q, q] = A[:, q, q].real

                Vp, Vq = V[:, :, p].copy(), V[:, :, q].copy()
                V[:, :, p] = cr * Vp - sc * Vq
                V[:, :, q] = sr * Vp + cc * Vq
    else:
        raise NoConvergence(f"Jacobi iteration did not converge in {_MAX_SWEEPS} sweeps")
    w = np.real(np.diagonal(A, axis1=1, axis2=2)).copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    return w, V


def herm_eig_batch(Hs, cfg=DEFAULT, check=True):
    """Eigen-decompose a stack of Hermitian matrices of shape (B, n, n).

    Returns ascending eigenvalues (B, n) and orthonormal eigenvector
    columns (B, n, n).
    """
    Hs = np.asarray(Hs, dtype=np.complex128)
    if Hs.ndim != 3 or Hs.shape[1] != Hs.shape[2]:
        raise ValidationError(f"expected a (B, n, n) stack, got shape {Hs.shape}")
    if check:
        _check_hermitian_batch(Hs, cfg.eps_herm)
    Hs = 0.5 * (Hs + np.conj(np.swapaxes(Hs, 1, 2)))
    n = Hs.shape[1]
    if n == 1:
        return Hs[:, :, 0].real.copy(), np.ones_like(Hs)
    tol = max(cfg.eps_eig * 1e-3, 1e-14 * n)
    return _jacobi(Hs, tol)


def _tridiagonalize(A):
    # Householder reduction of a Hermitian stack; returns real diagonal and |offdiag|^2
    A = A.copy()
    nb, n, _ = A.shape
    d = np.empty((nb, n))
    e2 = np.zeros((nb, max(n - 1, 0)))
    for k in range(n - 2):
        x = A[:, k + 1:, k]
        xn = np.linalg.norm(x, axis=1)
        e2[:, k] = xn ** 2
        x0 = x[:, 0]
        ph = np.where(np.abs(x0) > 0, x0 / np.where(np.abs(x0) > 0, np.abs(x0), 1.0), 1.0)
        v = x.copy()
        v[:, 0] += ph * xn
        vn = np.linalg.norm(v, axis=1)
        ok = vn > 1e-300 * np.maximum(xn, 1e-300)
        v = np.where(ok[:, None], v / np.where(ok, vn, 1.0)[:, None], 0.0)
        S = A[:, k + 1:, k + 1:]
        p = np.einsum("bij,bj->bi", S, v)
        K = np.einsum("bi,bi->b", np.conj(v), p).real
        w = p - K[:, None] * v
        S -= 2.0 * (v[:, :, None] * np.conj(w)[:, None, :] + w[:, :, None] * np.conj(v)[:, None, :])
        d[:, k] = A[:, k, k].real
    if n >= 2:
        d[:, n - 2] = A[:, n - 2, n - 2].real
        e2[:, n - 2] = np.abs(A[:, n - 1, n - 2]) ** 2
    d[:, n - 1] = A[:, n - 1, n - 1].real
    return d, e2


def _count_below(d, e2, x):
    # Sturm count: eigenvalues of the tridiagonal strictly below x
    nb, n = d.shape
    tiny = 1e-300
    q = d[:, 0] - x
    count = (q < 0).astype(int)
    for i in range(1, n):
        q = np.where(np.abs(q) < tiny, -tiny, q)
        q = d[:, i] - x - e2[:, i - 1] / q
        count += q < 0
    return count


def herm_top_eigenvalues(Hs, iters=64):
    """Largest eigenvalue of each Hermitian matrix in a (B, n, n) stack.

    Householder tridiagonalization followed by Sturm-sequence bisection;
    values only, no eigenvectors.
    """
    Hs = np.asarray(Hs, dtype=np.complex128)
    Hs = 0.5 * (Hs + np.conj(np.swapaxes(Hs, 1, 2)))
    n = Hs.shape[1]
    if n == 1:
        return Hs[:, 0, 0].real.copy()
    d, e2 = _tridiagonalize(Hs)
    e = np.sqrt(e2)
    rad = np.zeros_like(d)
    rad[:, :-1] += e
    rad[:, 1:] += e
    lo = (d - rad).min(axis=1)
    hi = (d + rad).max(axis=1)
    span = np.maximum(hi - lo, 1e-300)
    lo, hi = lo - 1e-12 * span, hi + 1e-12 * span
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        below_all = _count_below(d, e2, mid) >= n
        hi = np.where(below_all, mid, hi)
        lo = np.where(below_all, lo, mid)
    return 0.5 * (lo + hi)


def herm_eig(H, cfg=DEFAULT):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Raises NotHermitian when ``||H - H*|| > eps_herm ||H||``.
    """
    H = as_cmatrix(H)
    w, V = herm_eig_batch(H[None], cfg)
    return w[0], V[0]


def eigenvalues(A, cfg=DEFAULT):
    """Spectrum of a general matrix as a complex array sorted by (re, im)."""
    A = as_cmatrix(A)
    if A.shape[0] > MAX_DIM:
        raise ValidationError(f"dimension {A.shape[0]} exceeds supported size {MAX_DIM}")
    # Hessenberg + shifted QR (LAPACK geev)
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    # snap real parts so roundoff does not reorder points sharing an abscissa
    scale = max(float(np.abs(ev).max()), 1.0)
    key = np.round(ev.real / scale, 10)
    return ev[np.lexsort((ev.imag, key))]


def op_norm_batch(As, cfg=DEFAULT):
    """Largest singular value of every matrix in a (B, m, n) stack."""
    As = np.asarray(As, dtype=np.complex128)
    G = np.conj(np.swapaxes(As, 1, 2)) @ As
    w, _ = herm_eig_batch(G, cfg, check=False)
    return np.sqrt(np.maximum(w[:, -1], 0.0))


def op_norm(A, cfg=DEFAULT):
    """Operator 2-norm, computed as sqrt of the top eigenvalue of A*A."""
    A = np.atleast_2d(np.asarray(A, dtype=np.complex128))
    return float(op_norm_batch(A[None], cfg)[0])


def self_commutator(T):
    """T*T - TT*, symmetrized so the result is exactly Hermitian."""
    T = as_cmatrix(T)
    Ts = T.conj().T
    C = Ts @ T - T @ Ts
    return 0.5 * (C + C.conj().T)


def is_normal(T, cfg=DEFAULT):
    T = as_cmatrix(T)
    return fro(self_commutator(T)) <= tol_scaled(1e3 * cfg.eps_eig, fro(T) ** 2)


def is_positive_semidefinite(H, cfg=DEFAULT):
    H = as_cmatrix(H)
    w, _ = herm_eig(H, cfg)
    size = max(abs(w[0]), abs(w[-1]))
    return bool(w[0] >= -tol_scaled(cfg.eps_eig, size))


def direct_sum(blocks):
    """Block-diagonal matrix with the given blocks in order."""
    blocks = [as_cmatrix(b, name=f"block {k}") for k, b in enumerate(blocks)]
    if not blocks:
        raise EmptyInput("direct_sum needs at least one block")
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.complex128)
    i = 0
    for b in blocks:
        k = b.shape[0]
        out[i:i + k, i:i + k] = b
        i += k
    return out


def random_unitary(n, rng):
    """Haar-distributed unitary via QR with phase correction."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))
