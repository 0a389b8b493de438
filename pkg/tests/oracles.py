"""Reference computations built on LAPACK / scipy routes, independent of the package."""

import numpy as np
from scipy.optimize import linprog, minimize_scalar
from scipy.spatial import ConvexHull, QhullError


def support_lapack(T, thetas):
    th = np.asarray(thetas, dtype=float)
    ph = np.exp(-1j * th)[:, None, None]
    H = 0.5 * (ph * T + np.conj(ph) * T.conj().T)
    return np.linalg.eigvalsh(H)[:, -1]


def numerical_radius_oracle(T, grid=4096):
    """Dense LAPACK sweep, refined by bounded Brent search around the best angle."""
    T = np.asarray(T, dtype=complex)
    th = 2 * np.pi * np.arange(grid) / grid
    s = support_lapack(T, th)
    k = int(np.argmax(s))
    h = 2 * np.pi / grid
    res = minimize_scalar(lambda t: -support_lapack(T, [t])[0], bounds=(th[k] - h, th[k] + h),
                          method="bounded", options={"xatol": 1e-13})
    return max(float(s[k]), -float(res.fun))


def rayleigh_samples(T, count, rng):
    """Rayleigh quotients: half random unit vectors, half LAPACK top eigenvectors of Re(e^{-it}T)."""
    T = np.asarray(T, dtype=complex)
    n = T.shape[0]
    m = count // 2
    X = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    X /= np.linalg.norm(X, axis=1)[:, None]
    z1 = np.einsum("bi,ij,bj->b", X.conj(), T, X)
    th = 2 * np.pi * np.arange(count - m) / (count - m)
    ph = np.exp(-1j * th)[:, None, None]
    _, V = np.linalg.eigh(0.5 * (ph * T + np.conj(ph) * T.conj().T))
    x = V[:, :, -1]
    z2 = np.einsum("bi,ij,bj->b", x.conj(), T, x)
    return np.concatenate([z1, z2])


def hull_signed_distance(points, z):
    """Signed distance from z to the convex hull of planar points (positive outside)."""
    P = np.column_stack([np.real(points), np.imag(points)])
    try:
        hull = ConvexHull(P)
    except QhullError:
        # degenerate: fall back to distance to the farthest-apart segment
        d = np.abs(points - z)
        return float(d.min())
    eq = hull.equations  # a x + b y + c <= 0 inside, (a, b) unit normals
    vals = eq[:, :2] @ np.array([z.real, z.imag]) + eq[:, 2]
    if vals.max() <= 0:
        return float(vals.max())
    V = P[hull.vertices]
    p = np.array([z.real, z.imag])
    best = np.inf
    for i in range(len(V)):
        a, b = V[i], V[(i + 1) % len(V)]
        ab = b - a
        t = np.clip(np.dot(p - a, ab) / max(np.dot(ab, ab), 1e-300), 0, 1)
        best = min(best, float(np.linalg.norm(p - (a + t * ab))))
    return best


def representing_measure_exists(z, others):
    """LP: is z a convex combination of `others`? (z not extreme iff True)."""
    others = np.asarray(others, dtype=complex)
    if len(others) == 0:
        return False
    A_eq = np.vstack([others.real, others.imag, np.ones(len(others))])
    b_eq = np.array([z.real, z.imag, 1.0])
    res = linprog(np.zeros(len(others)), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * len(others),
                  method="highs")
    return res.status == 0
