"""Numerical range W(T): support sweeps, polygon approximation, numerical radius.

The sweep evaluates the top eigenpair of ``Re(e^{-i theta} T)`` at equispaced
directions. Each top eigenvector x yields the boundary point ``<Tx, x>``; when
the top eigenvalue is simple that point is exposed, hence extreme in W(T).
Between two consecutive directions W(T) is trapped in the triangle spanned by
the two support points and the intersection of their support lines, so the
polygon is refined by bisection until every such triangle is thinner than
``eps_hull * scale / 4``.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT
from .errors import HyponormalityFails
from .geometry import (
    Location,
    Polygon2D,
    convex_hull,
    extreme_points_of_polygon,
    geometric_scale,
    point_location,
)
from .linalg import (
    as_cmatrix,
    eigenvalues,
    herm_eig,
    herm_eig_batch,
    herm_top_eigenvalues,
    is_positive_semidefinite,
    op_norm,
    self_commutator,
)

TWO_PI = 2.0 * np.pi
_GOLDEN_ITERS = 60
_MAX_REFINE_ROUNDS = 16
_MAX_EXTRA_ANGLES = 1 << 15


@dataclass(eq=False)
class NumericalRangeApprox:
    polygon: Polygon2D
    angles: np.ndarray          # sweep directions, in sweep order
    support_values: np.ndarray  # lambda_max of Re(e^{-i theta} T) per angle
    points: np.ndarray          # boundary point recorded per angle
    radius: float
    source_dim: int
    exposed: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    extra_points: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))


def hermitian_parts(T, thetas):
    """Stack of (e^{-i theta} T + e^{i theta} T*) / 2 over `thetas`."""
    ph = np.exp(-1j * np.asarray(thetas, dtype=float))[:, None, None]
    return 0.5 * (ph * T + np.conj(ph) * T.conj().T)


def support_values(T, thetas, cfg=DEFAULT):
    """Support function h_W(theta) = lambda_max(Re(e^{-i theta} T))."""
    T = as_cmatrix(T)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    if T.shape[0] == 1:
        return (np.exp(-1j * thetas) * T[0, 0]).real
    return herm_top_eigenvalues(hermitian_parts(T, thetas))


def _support_points(T, thetas, cfg):
    """Per angle: support value, entry/exit boundary points, exposed flag, flat extras."""
    n = T.shape[0]
    thetas = np.asarray(thetas, dtype=float)
    H = hermitian_parts(T, thetas)
    w, V = herm_eig_batch(H, cfg, check=False)
    top = w[:, -1]
    x = V[:, :, -1]
    z = np.einsum("bi,ij,bj->b", np.conj(x), T, x)
    entry, exit_ = z.copy(), z.copy()
    exposed = np.ones(len(thetas), dtype=bool)
    extras = []
    if n > 1:
        tnorm = max(float(np.abs(w).max()), 1.0)
        mult = np.sum(w >= top[:, None] - 1e-10 * tnorm, axis=1)
        for k in np.nonzero(mult > 1)[0]:
            # flat face: order its points along the face by Im(e^{-i theta} T)
            E = V[k][:, n - mult[k]:]
            A = np.exp(-1j * thetas[k]) * T
            K = E.conj().T @ ((A - A.conj().T) / 2j) @ E
            _, U = herm_eig(0.5 * (K + K.conj().T), cfg)
            Y = E @ U
            zs = np.einsum("ik,ij,jk->k", np.conj(Y), T, Y)
            entry[k], exit_[k] = zs[0], zs[-1]
            extras.extend(zs[1:-1])
            exposed[k] = False
    return top, entry, exit_, exposed, np.asarray(extras, dtype=complex)


def _wedge_gap(t1, t2, s1, s2, z1, z2):
    # thickness of the triangle between chord z1z2 and the two support lines
    dt = t2 - t1
    gap = np.full(len(t1), np.inf)
    ok = dt < np.pi - 1e-9
    det = np.sin(dt)
    with np.errstate(divide="ignore", invalid="ignore"):
        qx = (s1 * np.sin(t2) - s2 * np.sin(t1)) / det
        qy = (s2 * np.cos(t1) - s1 * np.cos(t2)) / det
    q = qx + 1j * qy
    chord = z2 - z1
    L = np.abs(chord)
    cross = (chord.real * (q - z1).imag - chord.imag * (q - z1).real)
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(L > 1e-300, np.abs(cross) / np.where(L > 1e-300, L, 1.0), np.abs(q - z1))
    gap[ok] = d[ok]
    return gap


def numrange_sweep(T, cfg=DEFAULT, offset=0.0, angles=None, refine=True):
    """Polygonal inner approximation of W(T) from a support sweep.

    `angles` overrides cfg.angle_count. With `refine`, extra bisection
    directions are added (they feed the polygon, not the per-angle records)
    until the polygon is within eps_hull * scale / 4 of W(T).
    """
    T = as_cmatrix(T)
    N = cfg.angle_count if angles is None else int(angles)
    unwrapped = offset + TWO_PI * np.arange(N) / N
    top, entry, exit_, exposed, extras = _support_points(T, unwrapped, cfg)
    certified = list(exit_[exposed]) + [z for k in np.nonzero(~exposed)[0] for z in (entry[k], exit_[k])]
    extra_pts = list(extras)

    if refine and T.shape[0] > 1:
        tol = 0.25 * cfg.eps_hull * geometric_scale(np.concatenate([entry, exit_]))
        th, s, en, ex = unwrapped, top, entry, exit_
        added = 0
        for _ in range(_MAX_REFINE_ROUNDS):
            t2 = np.append(th[1:], th[0] + TWO_PI)
            gap = _wedge_gap(th, t2, s, np.roll(s, -1), ex, np.roll(en, -1))
            bad = np.nonzero(gap > tol)[0]
            if len(bad) == 0 or added + len(bad) > _MAX_EXTRA_ANGLES:
                break
            mid = 0.5 * (th[bad] + t2[bad])
            m_top, m_en, m_ex, m_exp, m_extra = _support_points(T, mid, cfg)
            added += len(bad)
            certified.extend(m_ex[m_exp])
            for k in np.nonzero(~m_exp)[0]:
                certified.extend([m_en[k], m_ex[k]])
            extra_pts.extend(m_extra)
            extra_pts.extend(m_en)
            extra_pts.extend(m_ex)
            order = np.argsort(np.concatenate([th, mid]), kind="stable")
            th = np.concatenate([th, mid])[order]
            s = np.concatenate([s, m_top])[order]
            en = np.concatenate([en, m_en])[order]
            ex = np.concatenate([ex, m_ex])[order]

    pts = np.concatenate([entry, exit_, np.asarray(extra_pts, dtype=complex)])
    poly = convex_hull(pts, cfg)
    radius = _radius_from_grid(T, unwrapped, top, cfg)
    return NumericalRangeApprox(
        polygon=poly,
        angles=np.mod(unwrapped, TWO_PI),
        support_values=top,
        points=exit_,
        radius=radius,
        source_dim=T.shape[0],
        exposed=np.asarray(certified, dtype=complex),
        extra_points=np.asarray(extra_pts, dtype=complex),
    )


def _local_maxima(s, count):
    # cyclic local maxima, best first
    idx = np.nonzero((s >= np.roll(s, 1)) & (s >= np.roll(s, -1)))[0]
    if len(idx) == 0:
        idx = np.array([int(np.argmax(s))])
    return idx[np.argsort(-s[idx], kind="stable")][:count]


def golden_max(f, a, b, iters=_GOLDEN_ITERS):
    """Vectorized golden-section maximization of f over brackets [a, b]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc > fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = np.where(left, b - invphi * (b - a), d)
        new_d = np.where(left, c, a + invphi * (b - a))
        # reuse one evaluation per bracket, recompute the other
        probe = np.where(left, new_c, new_d)
        fp = f(probe)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = new_c, new_d
    x = 0.5 * (a + b)
    return x, f(x)


def _radius_batch(Ts, grids, S, cfg, n_candidates=3):
    M, N = S.shape
    delta = TWO_PI / N
    owners, centers = [], []
    for m in range(M):
        for k in _local_maxima(S[m], n_candidates):
            owners.append(m)
            centers.append(grids[m][k])
    owners = np.array(owners)
    centers = np.array(centers)

    def f(th):
        H = 0.5 * (np.exp(-1j * th)[:, None, None] * Ts[owners]
                   + np.exp(1j * th)[:, None, None] * np.conj(np.swapaxes(Ts[owners], 1, 2)))
        return herm_top_eigenvalues(H)

    _, vals = golden_max(f, centers - delta, centers + delta)
    out = S.max(axis=1).copy()
    np.maximum.at(out, owners, vals)
    return out


def _radius_from_grid(T, grid, top, cfg):
    if T.shape[0] == 1:
        return float(abs(T[0, 0]))
    return float(_radius_batch(T[None], [grid], top[None], cfg)[0])


def numerical_radii(Ts, cfg=DEFAULT):
    """Numerical radius of every matrix in a (M, n, n) stack."""
    Ts = np.asarray(Ts, dtype=np.complex128)
    M, n, _ = Ts.shape
    if n == 1:
        return np.abs(Ts[:, 0, 0])
    N = cfg.angle_count
    grid = TWO_PI * np.arange(N) / N
    ph = np.exp(-1j * grid)[None, :, None, None]
    H = 0.5 * (ph * Ts[:, None] + np.conj(ph) * np.conj(np.swapaxes(Ts, 1, 2))[:, None])
    S = herm_top_eigenvalues(H.reshape(M * N, n, n)).reshape(M, N)
    return _radius_batch(Ts, [grid] * M, S, cfg)


def numerical_radius(T, cfg=DEFAULT):
    """max |z| over W(T): sweep maximum refined by golden-section search."""
    T = as_cmatrix(T)
    return float(numerical_radii(T[None], cfg)[0])


def is_extreme_point_of_range(lam, T, cfg=DEFAULT, nr=None):
    """True if `lam` lies on the boundary band of W(T) at an extreme point.

    Extreme points are taken from the polygon's vertex pruning and from the
    exposed sweep points (simple top eigenvalue), whose extremality is exact.
    """
    nr = numrange_sweep(T, cfg) if nr is None else nr
    poly = nr.polygon
    lam = complex(lam)
    if point_location(lam, poly, cfg) is not Location.ON_BOUNDARY:
        return False
    band = cfg.eps_hull * poly.scale
    cands = np.concatenate([np.asarray(extreme_points_of_polygon(poly, cfg), dtype=complex), nr.exposed])
    return bool(len(cands) and np.abs(cands - lam).min() <= band)


def distinct_points(z, tol):
    """Greedy clustering of complex values; returns representatives in input order."""
    reps = []
    for v in np.asarray(z, dtype=complex):
        if all(abs(v - r) > tol for r in reps):
            reps.append(complex(v))
    return reps


def spectral_extreme_boundary_points(T, cfg=DEFAULT):
    """Eigenvalues that are extreme points of W(T), certified when [T*, T] >= 0.

    Raises HyponormalityFails if the self-commutator is not positive.
    """
    T = as_cmatrix(T)
    if not is_positive_semidefinite(self_commutator(T), cfg):
        raise HyponormalityFails("T*T - TT* is not positive semidefinite")
    nr = numrange_sweep(T, cfg)
    tol = 1e-9 * max(1.0, op_norm(T, cfg))
    return [lam for lam in distinct_points(eigenvalues(T, cfg), tol)
            if is_extreme_point_of_range(lam, T, cfg, nr)]
