"""Operator descriptors: explicit matrices plus the symbolic operator classes."""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, NonpositiveWeight, NotUnimodular, ZeroWeight
from .linalg import as_cmatrix, direct_sum


@dataclass(frozen=True, eq=False)
class ExplicitMatrix:
    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", as_cmatrix(self.data))


@dataclass(frozen=True)
class DirectSum:
    blocks: tuple

    def __post_init__(self):
        if not self.blocks:
            raise EmptyInput("direct sum needs at least one block")
        object.__setattr__(self, "blocks", tuple(self.blocks))


@dataclass(frozen=True)
class FiniteShift:
    weights: tuple

    def __post_init__(self):
        w = tuple(complex(x) for x in self.weights)
        if not w:
            raise EmptyInput("finite shift needs at least one weight")
        if any(x == 0 for x in w):
            raise ZeroWeight("finite shift weights must be nonzero")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class PeriodicShift:
    weights: tuple

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w:
            raise EmptyInput("periodic shift needs at least one weight")
        if any(not x > 0 or not np.isfinite(x) for x in w):
            raise NonpositiveWeight("periodic shift weights must be strictly positive")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class UnilateralShift:
    pass


FULL_CIRCLE = "circle"


@dataclass(frozen=True)
class Unitary:
    spectrum: object  # FULL_CIRCLE or a tuple of unimodular points

    def __post_init__(self):
        if self.spectrum == FULL_CIRCLE:
            return
        pts = tuple(complex(z) for z in self.spectrum)
        if not pts:
            raise EmptyInput("unitary spectrum must be nonempty")
        for z in pts:
            if abs(abs(z) - 1.0) > 1e-12:
                raise NotUnimodular(f"spectral point {z} is not unimodular")
        object.__setattr__(self, "spectrum", pts)

    @property
    def full_circle(self):
        return self.spectrum == FULL_CIRCLE


@dataclass(frozen=True)
class NormalFinite:
    eigenvalues: tuple

    def __post_init__(self):
        ev = tuple(complex(z) for z in self.eigenvalues)
        if not ev:
            raise EmptyInput("normal operator needs at least one eigenvalue")
        object.__setattr__(self, "eigenvalues", ev)


def is_finite(d):
    if isinstance(d, (ExplicitMatrix, FiniteShift, NormalFinite)):
        return True
    if isinstance(d, Unitary):
        return not d.full_circle
    if isinstance(d, DirectSum):
        return all(is_finite(b) for b in d.blocks)
    return False


def to_matrix(d):
    """Dense matrix of a finite-dimensional descriptor."""
    if isinstance(d, ExplicitMatrix):
        return d.data
    if isinstance(d, FiniteShift):
        return np.diag(np.asarray(d.weights, dtype=complex), k=-1)
    if isinstance(d, NormalFinite):
        return np.diag(np.asarray(d.eigenvalues, dtype=complex))
    if isinstance(d, Unitary) and not d.full_circle:
        return np.diag(np.asarray(d.spectrum, dtype=complex))
    if isinstance(d, DirectSum):
        return direct_sum([to_matrix(b) for b in d.blocks])
    raise TypeError(f"{type(d).__name__} has no finite matrix form")
