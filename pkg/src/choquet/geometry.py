"""Planar convex geometry on complex numbers: hulls, tolerant membership, extreme points."""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import DEFAULT
from .errors import EmptyInput


class Shape(Enum):
    POLYGON = "polygon"
    SEGMENT = "segment"
    POINT = "point"


class Location(Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True, eq=False)
class Polygon2D:
    """Convex polygon with counterclockwise vertices, or a segment/point."""

    vertices: np.ndarray
    shape: Shape

    @property
    def scale(self):
        return geometric_scale(self.vertices)

    def __len__(self):
        return len(self.vertices)


def geometric_scale(points):
    """Diameter of a point set, floored at 1."""
    z = np.asarray(points, dtype=np.complex128).ravel()
    if len(z) < 2:
        return 1.0
    if len(z) > 64:
        return max(1.0, _hull_diameter(_monotone_chain(z, 0.0)))
    return max(1.0, float(np.abs(z[:, None] - z[None, :]).max()))


def _hull_diameter(h):
    # rotating calipers over a counterclockwise hull
    m = len(h)
    if m <= 3:
        return float(np.abs(h[:, None] - h[None, :]).max()) if m > 1 else 0.0
    best, j = 0.0, 1
    for i in range(m):
        a, b = h[i], h[(i + 1) % m]
        while abs(_cross(a, b, h[(j + 1) % m])) > abs(_cross(a, b, h[j])):
            j = (j + 1) % m
        best = max(best, abs(a - h[j]), abs(b - h[j]))
    return float(best)


def _cross(o, a, b):
    return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)


def _monotone_chain(z, tol):
    # tol: points within tol of the chord are dropped
    z = np.unique(z)  # lexicographic (re, im) sort
    if len(z) <= 2:
        return z
    pts = list(z)

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= tol * abs(p - out[-2]):
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return np.array(lower[:-1] + upper[:-1], dtype=np.complex128)


def convex_hull(points, cfg=DEFAULT):
    """Smallest convex polygon containing `points` up to eps_hull * scale.

    Collinear inputs give a SEGMENT and coincident inputs a POINT.
    """
    z = np.asarray(points, dtype=np.complex128).ravel()
    if len(z) == 0:
        raise EmptyInput("convex_hull of an empty point set")
    scale = geometric_scale(z)
    tol = cfg.eps_hull * scale
    lo = z[np.lexsort((z.imag, z.real))[0]]
    if np.abs(z - lo).max() <= tol:
        return Polygon2D(np.array([lo]), Shape.POINT)

    # keep every genuine vertex; eps_hull only merges and flags degeneracy
    hull = _monotone_chain(z, 1e-12 * scale)
    # drop vertices crowding their predecessor
    keep = [hull[0]]
    for v in hull[1:]:
        if abs(v - keep[-1]) > tol:
            keep.append(v)
    if len(keep) > 1 and abs(keep[-1] - keep[0]) <= tol:
        keep.pop()
    hull = np.array(keep)

    if len(hull) >= 3:
        a = hull[0]
        b = hull[int(np.argmax(np.abs(hull - a)))]
        width = np.abs(_cross(a, b, hull)) / abs(b - a)
        if width.max() > tol:
            return Polygon2D(hull, Shape.POLYGON)
        t = ((hull - a) * np.conj(b - a)).real
        hull = np.array([hull[int(np.argmin(t))], hull[int(np.argmax(t))]])
    if len(hull) == 2:
        a, b = sorted(hull, key=lambda w: (w.real, w.imag))
        return Polygon2D(np.array([a, b]), Shape.SEGMENT)
    return Polygon2D(hull[:1], Shape.POINT)


def _segment_distance(p, a, b):
    ab = b - a
    L2 = (ab.real ** 2 + ab.imag ** 2)
    t = np.where(L2 > 0, ((p - a) * np.conj(ab)).real / np.where(L2 > 0, L2, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    return np.abs(p - (a + t * ab))


def boundary_distance(p, poly):
    """Distance from `p` to the boundary (or to the set, if degenerate)."""
    v = poly.vertices
    if poly.shape is Shape.POINT:
        return float(abs(p - v[0]))
    if poly.shape is Shape.SEGMENT:
        return float(_segment_distance(p, v[0], v[1]))
    return float(_segment_distance(p, v, np.roll(v, -1)).min())


def _strictly_inside(p, poly):
    v = poly.vertices
    return bool(np.all(_cross(v, np.roll(v, -1), p) > 0))


def distance_to(p, poly):
    """Euclidean distance from `p` to the closed region; 0 inside."""
    if poly.shape is Shape.POLYGON and _strictly_inside(p, poly):
        return 0.0
    return boundary_distance(p, poly)


def signed_distance(p, poly):
    """Positive outside, negative inside, zero on the boundary."""
    d = boundary_distance(p, poly)
    if poly.shape is Shape.POLYGON and _strictly_inside(p, poly):
        return -d
    return d


def point_location(p, poly, cfg=DEFAULT):
    band = cfg.eps_hull * poly.scale
    d = boundary_distance(complex(p), poly)
    if d <= band:
        return Location.ON_BOUNDARY
    if poly.shape is Shape.POLYGON and _strictly_inside(complex(p), poly):
        return Location.INSIDE
    return Location.OUTSIDE


def extreme_points_of_polygon(poly, cfg=DEFAULT):
    """Vertices not within eps_hull * scale of the chord joining their neighbours."""
    v = poly.vertices
    if poly.shape is not Shape.POLYGON:
        return [complex(z) for z in v]
    tol = cfg.eps_hull * poly.scale
    d = _segment_distance(v, np.roll(v, 1), np.roll(v, -1))
    return [complex(z) for z in v[d > tol]]


def hausdorff(P, Q):
    """Hausdorff distance between two convex regions given as Polygon2D."""
    a = max(distance_to(z, Q) for z in P.vertices)
    b = max(distance_to(z, P) for z in Q.vertices)
    return float(max(a, b))
