"""Sampling the matricial range W_k(T) and screening for matrix extreme points.

Samples are compressions V*(T (x) 1_m)V by isometries V, or C*-convex
combinations sum A_j* X_j A_j of earlier samples with sum A_j* A_j = 1. The
screen looks for such a decomposition of a target Lambda that is nontrivial
(some summand of lower level, or not unitarily equivalent to Lambda); finding
one proves Lambda is not a matrix extreme point.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .config import DEFAULT
from .linalg import as_cmatrix, direct_sum, herm_eig, herm_eig_batch
from .numrange import TWO_PI, _support_points, _wedge_gap, hermitian_parts
from .structure import fingerprint_match

_NOISE = (0.01, 0.3)
_MIN_WEIGHT = 1e-6  # summands lighter than this do not count towards a witness


@dataclass(eq=False)
class MatricialRangeSample:
    k: int
    samples: list
    provenance: list = field(default_factory=list)

    def __len__(self):
        return len(self.samples)

    def stack(self):
        return np.array(self.samples)


def haar_isometry(N, k, rng):
    Z = (rng.standard_normal((N, k)) + 1j * rng.standard_normal((N, k))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.where(np.abs(d) > 0, np.abs(d), 1.0))


def _amplify(T, m):
    return np.kron(T, np.eye(m))


def _inv_sqrt(S, cfg):
    w, Q = herm_eig(S, cfg)
    return (Q / np.sqrt(np.maximum(w, 1e-300))) @ Q.conj().T


def boundary_directions(T, count, rng, cfg=DEFAULT):
    """`count` sorted directions, refined where the support wedges of W(T) are widest."""
    base = min(count, 64)
    th = TWO_PI * (np.arange(base) + rng.random(base)) / base
    if T.shape[0] == 1 or count == base:
        return np.sort(th)
    s, en, ex, _, _ = _support_points(T, th, cfg)
    while len(th) < count:
        t2 = np.append(th[1:], th[0] + TWO_PI)
        gap = _wedge_gap(th, t2, s, np.roll(s, -1), ex, np.roll(en, -1))
        gap = np.where(np.isfinite(gap), gap, np.abs(np.roll(en, -1) - ex) + 1.0)
        take = np.argsort(-gap, kind="stable")[:min(len(th), count - len(th))]
        mid = 0.5 * (th[take] + t2[take])
        m_s, m_en, m_ex, _, _ = _support_points(T, mid, cfg)
        order = np.argsort(np.concatenate([th, mid]) % TWO_PI, kind="stable")
        th = (np.concatenate([th, mid]) % TWO_PI)[order]
        s = np.concatenate([s, m_s])[order]
        en = np.concatenate([en, m_en])[order]
        ex = np.concatenate([ex, m_ex])[order]
    return th


def ucp_sample(T, k, n_samples, cfg=DEFAULT):
    """Seeded samples of W_k(T) with provenance.

    Roughly half the samples come from Haar isometries, a third from
    isometries built on top eigenvectors of Re(e^{-i t} T) (exactly, or with
    noise), the rest from C*-convex combinations of earlier samples. Here T
    is amplified to T (x) 1_m with k/n <= m <= k.
    """
    T = as_cmatrix(T)
    k, n_samples = int(k), int(n_samples)
    if k < 1 or n_samples < 1:
        raise ValueError("k and n_samples must be positive")
    n = T.shape[0]
    rng = np.random.default_rng(cfg.rng_seed)
    m_min = -(-k // n)
    kinds = rng.choice(3, size=n_samples, p=[0.5, 0.3, 0.2])
    kinds[:2] = [0, 1]
    samples, prov = [None] * n_samples, [None] * n_samples

    boundary_idx = np.nonzero(kinds == 1)[0]
    if len(boundary_idx):
        # directions concentrated where W(T) is poorly resolved; one eigen-solve per multiplicity
        nb = len(boundary_idx)
        n_exact = (nb + 1) // 2
        th = np.concatenate([boundary_directions(T, n_exact, rng, cfg),
                             TWO_PI * (np.arange(nb - n_exact) + rng.random(nb - n_exact)) / max(nb - n_exact, 1)])
        order = rng.permutation(nb)
        th, exact = th[order], (np.arange(nb) < n_exact)[order]
        ms = rng.integers(m_min, k + 1, size=nb)
        for m in np.unique(ms):
            sel = np.nonzero(ms == m)[0]
            Tm = _amplify(T, m)
            _, V = herm_eig_batch(hermitian_parts(Tm, th[sel]), cfg, check=False)
            for s, Vb in zip(sel, V):
                i = boundary_idx[s]
                Vk = Vb[:, -k:]
                noise = 0.0 if exact[s] else rng.uniform(*_NOISE)
                if noise:
                    E = rng.standard_normal(Vk.shape) + 1j * rng.standard_normal(Vk.shape)
                    Vk, _ = np.linalg.qr(Vk + noise * E / np.linalg.norm(E) * np.sqrt(k))
                samples[i] = Vk.conj().T @ Tm @ Vk
                prov[i] = {"kind": "boundary", "m": int(m), "theta": float(th[s]), "noise": float(noise),
                           "isometry": Vk}

    for i in range(n_samples):
        if kinds[i] == 0 or (kinds[i] == 2 and i < 2):
            m = int(rng.integers(m_min, k + 1))
            V = haar_isometry(n * m, k, rng)
            samples[i] = V.conj().T @ _amplify(T, m) @ V
            prov[i] = {"kind": "isometry", "m": m, "isometry": V}
        elif kinds[i] == 2:
            avail = [j for j in range(i) if samples[j] is not None]
            if len(avail) < 2:
                m = int(rng.integers(m_min, k + 1))
                V = haar_isometry(n * m, k, rng)
                samples[i] = V.conj().T @ _amplify(T, m) @ V
                prov[i] = {"kind": "isometry", "m": m, "isometry": V}
                continue
            r = int(rng.integers(2, 4))
            parents = list(rng.choice(avail, size=min(r, len(avail)), replace=False))
            A = [rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)) for _ in parents]
            Sinv = _inv_sqrt(sum(a.conj().T @ a for a in A), cfg)
            A = [a @ Sinv for a in A]
            samples[i] = sum(a.conj().T @ samples[j] @ a for a, j in zip(A, parents))
            prov[i] = {"kind": "combination", "parents": [int(j) for j in parents], "weights": A}
    return MatricialRangeSample(k, samples, prov)


def combine(sample, parents, weights):
    """Append the C*-convex combination sum A_j* X_j A_j of existing samples."""
    A = [np.asarray(a, dtype=complex) for a in weights]
    X = sum(a.conj().T @ sample.samples[j] @ a for a, j in zip(A, parents))
    sample.samples.append(X)
    sample.provenance.append({"kind": "combination", "parents": list(parents), "weights": A})
    return X


# ------------------------------------------------------------------ screen


class ScreenResult(Enum):
    NOT_EXTREME = "not_extreme"
    NO_WITNESS_FOUND = "no_witness_found"


@dataclass(eq=False)
class Witness:
    """Lambda = sum_j A_j* Omega_j A_j with sum_j A_j* A_j = 1."""

    omegas: list
    coefficients: list
    sources: list

    def reconstruct(self):
        return sum(A.conj().T @ O @ A for O, A in zip(self.omegas, self.coefficients))

    def isometry_error(self):
        k = self.coefficients[0].shape[1]
        return float(np.linalg.norm(sum(A.conj().T @ A for A in self.coefficients) - np.eye(k)))


@dataclass(eq=False)
class ScreenOutcome:
    result: ScreenResult
    witness: Witness = None
    evaluations: int = 0

    @property
    def not_extreme(self):
        return self.result is ScreenResult.NOT_EXTREME


def _repack(omegas, coeffs, sources, tol=1e-12):
    # drop zero summands and compress rank-deficient A_j onto their range
    out_o, out_a, out_s = [], [], []
    for O, A, s in zip(omegas, coeffs, sources):
        if np.linalg.norm(A) <= tol:
            continue
        U, sv, Vh = np.linalg.svd(A, full_matrices=False)
        r = int(np.sum(sv > tol * max(sv[0], 1.0)))
        if r < A.shape[0]:
            Q = U[:, :r]
            out_o.append(Q.conj().T @ O @ Q)
            out_a.append(Q.conj().T @ A)
        else:
            out_o.append(O)
            out_a.append(A)
        out_s.append(s)
    return out_o, out_a, out_s


def _nontrivial(Lam, omegas):
    k = Lam.shape[0]
    return any(O.shape[0] < k or not fingerprint_match(O, Lam) for O in omegas)


def _accept(Lam, omegas, coeffs, sources, tol):
    k = Lam.shape[0]
    heavy = [j for j, A in enumerate(coeffs) if np.linalg.norm(A) ** 2 / k >= _MIN_WEIGHT]
    if len(heavy) < len(coeffs):
        if not heavy:
            return None
        omegas = [omegas[j] for j in heavy]
        sources = [sources[j] for j in heavy]
        coeffs = [coeffs[j] for j in heavy]
        Sinv = _inv_sqrt(sum(A.conj().T @ A for A in coeffs), DEFAULT)
        coeffs = [A @ Sinv for A in coeffs]
    omegas, coeffs, sources = _repack(omegas, coeffs, sources)
    if not omegas:
        return None
    w = Witness(omegas, coeffs, sources)
    size = max(1.0, float(np.linalg.norm(Lam)))
    if np.linalg.norm(w.reconstruct() - Lam) > tol * size or w.isometry_error() > 1e-10:
        return None
    return w if _nontrivial(Lam, omegas) else None


def _simplex_fit(X, target):
    # least squares over the affine span, then require nonnegative weights
    D = (X[1:] - X[0]).reshape(len(X) - 1, -1).T
    b = (target - X[0]).ravel()
    D = np.vstack([D.real, D.imag])
    b = np.concatenate([b.real, b.imag])
    s, *_ = np.linalg.lstsq(D, b, rcond=None)
    t = np.concatenate([[1.0 - s.sum()], s])
    return t


def _directions(P, Lam):
    V = (P - Lam).reshape(len(P), -1)
    V = np.hstack([V.real, V.imag])
    nrm = np.linalg.norm(V, axis=1)
    return V / np.where(nrm > 0, nrm, 1.0)[:, None], nrm


def matrix_extreme_screen(Lam, sample, cfg=DEFAULT, budget=None, tol=1e-10):
    """Search for a nontrivial C*-convex decomposition of Lam over the samples.

    `sample` is a MatricialRangeSample or a list of them (levels up to k).
    NOT_EXTREME comes with a witness; NO_WITNESS_FOUND is inconclusive.
    """
    Lam = as_cmatrix(Lam, "Lambda")
    k = Lam.shape[0]
    pools = sample if isinstance(sample, (list, tuple)) else [sample]
    budget = int(budget if budget is not None else 10 * sum(len(s) for s in pools))
    rng = np.random.default_rng(cfg.rng_seed)
    used = 0

    same = [s for s in pools if s.k == k]
    if same:
        P = np.concatenate([s.stack() for s in same])
        src = [(pi, i) for pi, s in enumerate(pools) if s.k == k for i in range(len(s))]
        U, dist = _directions(P, Lam)
        N = len(P)
        # pairs whose directions from Lam are nearly opposite
        n_pairs = max(1, min(budget // 4, N * (N - 1) // 2))
        best = []
        for lo in range(0, N, 512):
            G = U[lo:lo + 512] @ U.T
            for r in range(G.shape[0]):
                G[r, :lo + r + 1] = np.inf
            take = min(n_pairs, G.size - 1)
            flat = np.argpartition(G, take, axis=None)[:take]
            a, b = np.unravel_index(flat, G.shape)
            best.extend(zip(G[a, b], a + lo, b))
        best.sort()
        pairs = [(int(a), int(b)) for g, a, b in best[:n_pairs] if np.isfinite(g)]
        for a, b in pairs:
            if used >= budget:
                break
            used += 1
            t = _simplex_fit(P[[a, b]], Lam)
            if np.all(t >= -1e-14):
                t = np.clip(t, 0, None)
                t /= t.sum()
                w = _accept(Lam, [P[a], P[b]], [np.sqrt(x) * np.eye(k) for x in t], [src[a], src[b]], tol)
                if w is not None:
                    return ScreenOutcome(ScreenResult.NOT_EXTREME, w, used)
            # third point on the far side of the residual
            on = t[0] * P[a] + t[1] * P[b]
            r = (Lam - on).ravel()
            r = np.concatenate([r.real, r.imag])
            if np.linalg.norm(r) == 0:
                continue
            c = int(np.argmax(U @ (r / np.linalg.norm(r))))
            if c in (a, b):
                continue
            used += 1
            t = _simplex_fit(P[[a, b, c]], Lam)
            if np.all(t >= -1e-14):
                t = np.clip(t, 0, None)
                t /= t.sum()
                w = _accept(Lam, [P[a], P[b], P[c]], [np.sqrt(x) * np.eye(k) for x in t],
                            [src[a], src[b], src[c]], tol)
                if w is not None:
                    return ScreenOutcome(ScreenResult.NOT_EXTREME, w, used)
        # random triples
        while used < budget // 2 and N >= 3:
            idx = rng.choice(N, size=3, replace=False)
            used += 1
            t = _simplex_fit(P[idx], Lam)
            if np.all(t >= -1e-14):
                t = np.clip(t, 0, None)
                t /= t.sum()
                w = _accept(Lam, list(P[idx]), [np.sqrt(x) * np.eye(k) for x in t],
                            [src[i] for i in idx], tol)
                if w is not None:
                    return ScreenOutcome(ScreenResult.NOT_EXTREME, w, used)

    # compression search: Lam = A* (Omega_1 (+) Omega_2) A over isometries A
    flat = [(pi, i, s.samples[i]) for pi, s in enumerate(pools) if s.k <= k for i in range(len(s))]
    while used < budget and len(flat) >= 2:
        picks = rng.choice(len(flat), size=2, replace=False)
        omegas = [flat[j][2] for j in picks]
        res, A, iters = _compression_search(Lam, omegas, rng, min(200, budget - used))
        used += max(iters, 1)
        if res <= tol * max(1.0, float(np.linalg.norm(Lam))):
            dims = np.cumsum([0] + [O.shape[0] for O in omegas])
            coeffs = [A[dims[j]:dims[j + 1]] for j in range(len(omegas))]
            w = _accept(Lam, omegas, coeffs, [flat[j][:2] for j in picks], tol)
            if w is not None:
                return ScreenOutcome(ScreenResult.NOT_EXTREME, w, used)
    return ScreenOutcome(ScreenResult.NO_WITNESS_FOUND, None, used)


def _compression_search(Lam, omegas, rng, iters):
    """Riemannian gradient descent for min ||A* Omega A - Lam|| over isometries A."""
    Om = direct_sum(omegas)
    N, k = Om.shape[0], Lam.shape[0]
    if N < k:
        return np.inf, None, 0
    A = haar_isometry(N, k, rng)

    def f(A):
        R = A.conj().T @ Om @ A - Lam
        return float(np.linalg.norm(R) ** 2), R

    val, R = f(A)
    step = 0.5
    for it in range(iters):
        G = 2 * (Om @ A @ R.conj().T + Om.conj().T @ A @ R)
        G = G - A @ (0.5 * (A.conj().T @ G + G.conj().T @ A))
        if np.linalg.norm(G) < 1e-14:
            break
        while step > 1e-12:
            Q, Rq = np.linalg.qr(A - step * G)
            Q = Q * np.sign(np.diagonal(Rq).real + (np.diagonal(Rq).real == 0))
            nv, nR = f(Q)
            if nv < val:
                A, val, R = Q, nv, nR
                step *= 1.5
                break
            step *= 0.5
        else:
            break
        if val < 1e-24:
            break
    return np.sqrt(val), A, it + 1
