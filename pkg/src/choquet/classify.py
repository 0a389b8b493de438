"""Boundary representations and C*-envelope verdicts for concrete operators.

Scalar blocks are decided exactly by their position relative to the numerical
ranges of the other blocks. Larger blocks are never declared boundary by
theorem: they are either certified necessary by a norm-drop witness (a
polynomial in T, T* whose norm falls when the block is removed) or left
undetermined.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .descriptors import (
    DirectSum,
    ExplicitMatrix,
    FiniteShift,
    NormalFinite,
    PeriodicShift,
    UnilateralShift,
    Unitary,
    is_finite,
    to_matrix,
)
from .envelope import (
    BlockSum,
    BoundaryStatus,
    CompactOperators,
    ContinuousOnCircle,
    DroppedBlocks,
    EnvelopeVerdict,
    FiniteFunctionAlgebra,
    FullMatrixAlgebra,
    Status,
    Trivial,
    TwoPoints,
    Undetermined,
    UndeterminedShilov,
    cj,
)
from .errors import EmptyInput, NotHermitian, NotScalarBlock, ScalarOperator, UnsupportedDescriptor, ValidationError
from .geometry import Location, convex_hull, extreme_points_of_polygon, geometric_scale, point_location, signed_distance
from .linalg import MAX_DIM, as_cmatrix, eigenvalues, fro, herm_eig, is_normal, op_norm_batch
from .numrange import TWO_PI, distinct_points, golden_max, numrange_sweep, support_values
from .shifts import normalize_spec, periodic_envelope_verdict
from .structure import decompose_irreducible, fingerprint_match


# ---------------------------------------------------------------- grouping


def equivalence_groups(blocks, tol=1e-8):
    """Partition block indices into fingerprint-equivalence classes (first-seen order)."""
    groups = []
    for j, B in enumerate(blocks):
        for g in groups:
            if fingerprint_match(blocks[g[0]], B, tol):
                g.append(j)
                break
        else:
            groups.append([j])
    return groups


def _group_of(j, groups):
    return next(g for g in groups if j in g)


# ------------------------------------------------------------ scalar blocks


def classify_scalar_block(ell, decomp, cfg=DEFAULT, groups=None, sweeps=None):
    """Boundary status of the 1 x 1 block `ell`.

    The block is a boundary representation iff its value lies outside the
    closed convex hull of the numerical ranges of the inequivalent blocks.
    """
    blocks = decomp.blocks
    if blocks[ell].shape != (1, 1):
        raise NotScalarBlock(f"block {ell} has dimension {blocks[ell].shape[0]}")
    lam = complex(blocks[ell][0, 0])
    groups = equivalence_groups(blocks) if groups is None else groups
    same = set(_group_of(ell, groups))
    others = [j for j in range(len(blocks)) if j not in same]
    ev = {"rule": "scalar_block_hull", "value": cj(lam), "compared_blocks": others}
    if not others:
        ev.update(hull_distance=None, band=False)
        return BoundaryStatus(ell, Status.BOUNDARY, ev)

    sweeps = {} if sweeps is None else sweeps
    for j in others:
        if j not in sweeps:
            sweeps[j] = numrange_sweep(blocks[j], cfg)
    poly = convex_hull(np.concatenate([sweeps[j].polygon.vertices for j in others]), cfg)
    band = cfg.eps_hull * poly.scale
    dist = signed_distance(lam, poly)
    loc = point_location(lam, poly, cfg)
    ev["hull_distance"] = dist
    ev["location"] = loc.value
    ev["band"] = bool(abs(dist) <= band)
    if loc is not Location.OUTSIDE:
        return BoundaryStatus(ell, Status.NOT_BOUNDARY, ev)

    # certify separation with a support line: Re(e^{-i t} lam) > max_j h_j(t)
    th = sweeps[others[0]].angles
    h = np.max([sweeps[j].support_values for j in others], axis=0)
    g = (np.exp(-1j * th) * lam).real - h
    k = int(np.argmax(g))
    delta = TWO_PI / len(th)

    def gap(t):
        hs = np.max([support_values(blocks[j], t, cfg) for j in others], axis=0)
        return (np.exp(-1j * t) * lam).real - hs

    t_best, g_best = golden_max(gap, np.array([th[k] - delta]), np.array([th[k] + delta]))
    if g_best[0] >= g[k]:
        t_sep, g_sep = float(t_best[0]) % TWO_PI, float(g_best[0])
    else:
        t_sep, g_sep = float(th[k]), float(g[k])
    ev["separation_angle"] = t_sep
    ev["separation_gap"] = g_sep
    if g_sep > 1e-9 * poly.scale:
        ev["band"] = bool(g_sep <= band)
        return BoundaryStatus(ell, Status.BOUNDARY, ev)
    ev["band"] = True
    return BoundaryStatus(ell, Status.NOT_BOUNDARY, ev)


# ---------------------------------------------------------- certificates


@dataclass
class NormDropCertificate:
    """||p(T)|| on the kept blocks is below ||p(T)|| on all blocks.

    level 1: p = a + b T + c T* with complex scalars.
    level 2: p = A (x) 1 + B (x) T + C (x) T* with 2 x 2 coefficient matrices.
    """

    level: int
    kept: tuple
    coefficients: list  # [a, b, c], scalars or 2 x 2 arrays
    full_norm: float
    kept_norm: float

    @property
    def gap(self):
        return self.full_norm - self.kept_norm

    def to_json(self):
        if self.level == 1:
            coeffs = [cj(c) for c in self.coefficients]
        else:
            coeffs = [[[cj(z) for z in row] for row in np.asarray(C)] for C in self.coefficients]
        return {"level": self.level, "kept": list(self.kept), "coefficients": coeffs,
                "full_norm": self.full_norm, "kept_norm": self.kept_norm}

    @classmethod
    def from_json(cls, obj):
        if obj["level"] == 1:
            coeffs = [complex(*c) for c in obj["coefficients"]]
        else:
            coeffs = [np.array([[complex(*z) for z in row] for row in C]) for C in obj["coefficients"]]
        return cls(obj["level"], tuple(obj["kept"]), coeffs, obj["full_norm"], obj["kept_norm"])


def _poly_stack(T, coeffs, level):
    # coeffs: (B, 3) for level 1, (B, 3, 2, 2) for level 2
    n = T.shape[0]
    Ts = T.conj().T
    if level == 1:
        a, b, c = coeffs[:, 0], coeffs[:, 1], coeffs[:, 2]
        return (a[:, None, None] * np.eye(n) + b[:, None, None] * T + c[:, None, None] * Ts)
    A, B, C = coeffs[:, 0], coeffs[:, 1], coeffs[:, 2]
    out = (np.einsum("bil,km->bikml", A, np.eye(n)) + np.einsum("bil,km->bikml", B, T)
           + np.einsum("bil,km->bikml", C, Ts))
    return out.reshape(len(coeffs), 2 * n, 2 * n)


def _block_norms(blocks, coeffs, level, cfg):
    # (B, m) matrix of norms, one column per block
    return np.stack([op_norm_batch(_poly_stack(T, coeffs, level), cfg) for T in blocks], axis=1)


def _objective(norms, kept_mask):
    full = norms.max(axis=1)
    kept = norms[:, kept_mask].max(axis=1) if kept_mask.any() else np.zeros(len(norms))
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(full > 0, (full - kept) / np.where(full > 0, full, 1.0), 0.0)
    return rel, full, kept


def _to_complex(x, level):
    z = x[..., 0::2] + 1j * x[..., 1::2]
    if level == 1:
        return z
    return z.reshape(z.shape[:-1] + (3, 2, 2))


def _seed_candidates(level, rng, count):
    dim = 6 if level == 1 else 24
    fixed = []
    if level == 1:
        for a, b, c in [(0, 1, 0), (0, 1, 1), (0, 1, -1), (0, 1j, -1j), (1, 0.1, 0.1), (1, 0.5, 0.5),
                        (1, -0.1, -0.1), (1, 0.1j, -0.1j), (1, -0.1j, 0.1j), (1, 0.1, 0), (1, 0.1j, 0)]:
            fixed.append([np.real(a), np.imag(a), np.real(b), np.imag(b), np.real(c), np.imag(c)])
    fixed = np.array(fixed, dtype=float).reshape(-1, dim)
    rand = rng.standard_normal((max(count - len(fixed), 0), dim))
    return np.vstack([fixed, rand])


def _search_level(blocks, kept_mask, level, budget, thr, cfg, rng):
    n_rand = max(1, int(0.8 * budget))
    X = _seed_candidates(level, rng, n_rand)
    rel, full, kept = _objective(_block_norms(blocks, _to_complex(X, level), level, cfg), kept_mask)
    used = len(X)
    i = int(np.argmax(rel))
    x, best = X[i].copy(), rel[i]
    dim = X.shape[1]
    step = 0.25 * max(np.linalg.norm(x) / np.sqrt(dim), 1e-3)
    while used + 2 * dim <= budget and step > 1e-6:
        P = np.repeat(x[None], 2 * dim, axis=0)
        idx = np.arange(dim)
        P[2 * idx, idx] += step
        P[2 * idx + 1, idx] -= step
        r, _, _ = _objective(_block_norms(blocks, _to_complex(P, level), level, cfg), kept_mask)
        used += len(P)
        j = int(np.argmax(r))
        if r[j] > best:
            x, best = P[j], r[j]
        else:
            step *= 0.5
        if best > 0.5:
            break
    c = _to_complex(x[None], level)
    norms = _block_norms(blocks, c, level, cfg)
    rel, full, kept = _objective(norms, kept_mask)
    if full[0] - kept[0] > thr * full[0]:
        coeffs = list(c[0]) if level == 1 else [np.array(M) for M in c[0]]
        return coeffs, float(full[0]), float(kept[0])
    return None


def norm_drop_certificate(decomp, kept, cfg=DEFAULT):
    """Search for a polynomial whose norm drops when restricted to the `kept` blocks.

    Returns a NormDropCertificate or None; None is not a proof that the
    restriction is completely isometric.
    """
    kept = tuple(sorted(set(int(k) for k in kept)))
    if not kept:
        raise EmptyInput("kept block set must be nonempty")
    blocks = decomp.blocks
    if set(kept) == set(range(len(blocks))):
        return None
    mask = np.zeros(len(blocks), dtype=bool)
    mask[list(kept)] = True
    rng = np.random.default_rng(cfg.rng_seed)
    thr = cfg.eps_hull
    half = max(cfg.cert_budget // 2, 16)
    for level in (1, 2):
        found = _search_level(blocks, mask, level, half, thr, cfg, rng)
        if found is not None:
            coeffs, full, kn = found
            return NormDropCertificate(level, kept, coeffs, full, kn)
    return None


def trivial_certificate():
    """Certificate for dropping everything: the identity has norm 1, the empty sum 0."""
    return NormDropCertificate(1, (), [1.0 + 0j, 0j, 0j], 1.0, 0.0)


def verify_certificate(cert, blocks, cfg=DEFAULT):
    """Recompute a certificate's norms with LAPACK SVDs; return (ok, full, kept)."""
    norms = []
    for T in blocks:
        T = as_cmatrix(T)
        n = T.shape[0]
        a, b, c = cert.coefficients
        if cert.level == 1:
            M = a * np.eye(n) + b * T + c * T.conj().T
        else:
            M = np.kron(a, np.eye(n)) + np.kron(b, T) + np.kron(c, T.conj().T)
        norms.append(float(np.linalg.norm(M, 2)))
    full = max(norms)
    kept = max((norms[k] for k in cert.kept), default=0.0)
    return bool(full - kept > cfg.eps_hull * full), full, kept


# --------------------------------------------------------------- verdicts


def _flag_and_shilov(dropped):
    if dropped:
        return True, DroppedBlocks(tuple(sorted(dropped)))
    return False, Trivial()


def classify_selfadjoint(T, cfg=DEFAULT):
    """Hermitian T: the envelope is C^2, carried by the extreme eigenvalues."""
    T = as_cmatrix(T)
    if fro(T - T.conj().T) > max(cfg.eps_herm * fro(T), 1e-14):
        raise NotHermitian("operator is not selfadjoint")
    w, _ = herm_eig(T, cfg)
    tol = 1e-9 * max(1.0, float(np.abs(w).max()))
    pts = sorted(z.real for z in distinct_points(w, tol))
    if len(pts) < 2:
        raise ScalarOperator("selfadjoint operator with a single spectral point")
    statuses = []
    for i, t in enumerate(pts):
        end = i in (0, len(pts) - 1)
        statuses.append(BoundaryStatus(i, Status.BOUNDARY if end else Status.NOT_BOUNDARY,
                                       {"rule": "selfadjoint_extremes", "value": t}))
    dropped = list(range(1, len(pts) - 1))
    flag, shilov = _flag_and_shilov(dropped)
    verdict = EnvelopeVerdict(TwoPoints((pts[0], pts[-1])), shilov, flag,
                              {"spectrum": pts})
    return statuses, verdict


def classify_normal_finite(eigs, cfg=DEFAULT):
    """Finite normal spectrum: boundary characters sit at the extreme points of the hull."""
    z = np.asarray(eigs, dtype=complex).ravel()
    if len(z) == 0:
        raise EmptyInput("eigenvalue list is empty")
    tol = 1e-9 * max(1.0, float(np.abs(z).max()))
    pts = distinct_points(z, tol)
    scale = geometric_scale(pts)
    band = cfg.eps_hull * scale
    hull = convex_hull(pts, cfg)
    ext = np.asarray(extreme_points_of_polygon(hull, cfg), dtype=complex)
    statuses, boundary, dropped = [], [], []
    for i, p in enumerate(pts):
        is_ext = bool(len(ext) and np.abs(ext - p).min() <= band)
        rest = [q for k, q in enumerate(pts) if k != i]
        d = signed_distance(p, convex_hull(rest, cfg)) if rest else None
        ev = {"rule": "normal_hull_extremes", "value": cj(p),
              "distance_to_others": d, "band": bool(d is not None and abs(d) <= band)}
        statuses.append(BoundaryStatus(i, Status.BOUNDARY if is_ext else Status.NOT_BOUNDARY, ev))
        (boundary if is_ext else dropped).append(i)
    flag, shilov = _flag_and_shilov(dropped)
    verdict = EnvelopeVerdict(FiniteFunctionAlgebra(tuple(pts[i] for i in boundary)), shilov, flag,
                              {"spectrum": [cj(p) for p in pts]})
    return statuses, verdict


def classify_matrix_operator(T, cfg=DEFAULT):
    """Statuses of the irreducible summands of T and the resulting envelope."""
    T = as_cmatrix(T)
    n = T.shape[0]
    if n > MAX_DIM:
        raise ValidationError(f"dimension {n} exceeds supported size {MAX_DIM}")
    if n == 1 or fro(T - T[0, 0] * np.eye(n)) <= max(1e-12 * fro(T), 1e-14):
        return classify_normal_finite([T[0, 0]], cfg)
    if fro(T - T.conj().T) <= max(cfg.eps_herm * fro(T), 1e-14):
        return classify_selfadjoint(T, cfg)
    if is_normal(T, cfg):
        return classify_normal_finite(eigenvalues(T, cfg), cfg)

    dec = decompose_irreducible(T, cfg)
    blocks = dec.blocks
    groups = equivalence_groups(blocks)
    base_ev = {"block_dims": list(dec.block_dims),
               "blocks": [[[cj(z) for z in row] for row in B] for B in blocks],
               "groups": groups}
    if len(groups) == 1:
        st = [BoundaryStatus(j, Status.BOUNDARY, {"rule": "irreducible_simple_algebra"})
              for j in range(len(blocks))]
        return st, EnvelopeVerdict(FullMatrixAlgebra(int(blocks[0].shape[0])), Trivial(), False, base_ev)

    status = {}
    sweeps = {}
    for g in groups:
        if blocks[g[0]].shape[0] == 1:
            s = classify_scalar_block(g[0], dec, cfg, groups, sweeps)
            for j in g:
                status[j] = BoundaryStatus(j, s.status, dict(s.evidence))
    dropped_scalar = [j for j, s in status.items() if s.status is Status.NOT_BOUNDARY]
    for g in groups:
        if blocks[g[0]].shape[0] == 1:
            continue
        kept = [j for j in range(len(blocks)) if j not in g and j not in dropped_scalar]
        cert = trivial_certificate() if not kept else norm_drop_certificate(dec, kept, cfg)
        for j in g:
            if cert is None:
                status[j] = BoundaryStatus(j, Status.UNDETERMINED, {"rule": "norm_drop_search", "certificate": None})
            else:
                status[j] = BoundaryStatus(j, Status.REQUIRED,
                                           {"rule": "norm_drop_search", "certificate": cert.to_json()})
    statuses = [status[j] for j in range(len(blocks))]
    dropped = sorted(j for j, s in status.items() if s.status is Status.NOT_BOUNDARY)
    flag = bool(dropped)
    if any(s.status is Status.UNDETERMINED for s in statuses):
        return statuses, EnvelopeVerdict(Undetermined("no norm-drop certificate for some block"),
                                         UndeterminedShilov(), flag, base_ev)
    kept_groups = [g for g in groups if status[g[0]].status is not Status.NOT_BOUNDARY]
    dims = sorted((int(blocks[g[0]].shape[0]) for g in kept_groups), reverse=True)
    shape = FullMatrixAlgebra(dims[0]) if len(dims) == 1 else BlockSum(tuple(dims))
    shilov = DroppedBlocks(tuple(dropped)) if dropped else Trivial()
    return statuses, EnvelopeVerdict(shape, shilov, flag, base_ev)


def classify_descriptor(d, cfg=DEFAULT):
    """Dispatch on the operator class."""
    if isinstance(d, UnilateralShift):
        st = [BoundaryStatus("circle", Status.BOUNDARY, {"rule": "proper_isometry"}),
              BoundaryStatus("identity", Status.NOT_BOUNDARY, {"rule": "proper_isometry"})]
        return st, EnvelopeVerdict(ContinuousOnCircle(), CompactOperators(), True, {"rule": "proper_isometry"})
    if isinstance(d, Unitary):
        if d.full_circle:
            st = [BoundaryStatus("circle", Status.BOUNDARY, {"rule": "unitary_full_circle"})]
            return st, EnvelopeVerdict(ContinuousOnCircle(), Trivial(), False, {"rule": "unitary_full_circle"})
        pts = distinct_points(d.spectrum, 1e-12)
        st = [BoundaryStatus(i, Status.BOUNDARY, {"rule": "unitary_spectrum", "value": cj(z)})
              for i, z in enumerate(pts)]
        return st, EnvelopeVerdict(FiniteFunctionAlgebra(tuple(pts)), Trivial(), False, {"rule": "unitary_spectrum"})
    if isinstance(d, NormalFinite):
        return classify_normal_finite(d.eigenvalues, cfg)
    if isinstance(d, FiniteShift):
        k = len(d.weights) + 1
        st = [BoundaryStatus(0, Status.BOUNDARY, {"rule": "finite_shift"})]
        return st, EnvelopeVerdict(FullMatrixAlgebra(k), Trivial(), False, {"rule": "finite_shift"})
    if isinstance(d, PeriodicShift):
        verdict = periodic_envelope_verdict(normalize_spec(d.weights), cfg)
        if verdict.determined:
            st = [BoundaryStatus("circle", Status.BOUNDARY, {"rule": verdict.evidence.get("rule")}),
                  BoundaryStatus("identity", Status.NOT_BOUNDARY, {"rule": verdict.evidence.get("rule")})]
        else:
            st = [BoundaryStatus("circle", Status.UNDETERMINED, {"rule": verdict.evidence.get("rule")})]
        return st, verdict
    if isinstance(d, ExplicitMatrix):
        return classify_matrix_operator(d.data, cfg)
    if isinstance(d, DirectSum):
        if not is_finite(d):
            raise UnsupportedDescriptor("direct sums with infinite-dimensional summands are not supported")
        return classify_matrix_operator(to_matrix(d), cfg)
    raise UnsupportedDescriptor(f"unknown descriptor {type(d).__name__}")


def recheck_certificates(statuses, verdict, cfg=DEFAULT):
    """Re-verify every stored norm-drop certificate against the blocks in the verdict evidence.

    Returns a list of (rep_id, ok, full_norm, kept_norm).
    """
    blocks = [np.array([[complex(*z) for z in row] for row in B]) for B in verdict.evidence.get("blocks", [])]
    out = []
    for s in statuses:
        cert = s.evidence.get("certificate") if isinstance(s.evidence, dict) else None
        if cert is None:
            continue
        ok, full, kept = verify_certificate(NormDropCertificate.from_json(cert), blocks, cfg)
        out.append((s.rep_id, ok, full, kept))
    return out
