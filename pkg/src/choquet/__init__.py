"""Noncommutative Choquet boundaries and C*-envelopes of single operators.

Finite matrices are handled numerically (numerical ranges, irreducible
decompositions, norm-drop certificates); the unilateral shift, unitaries and
periodic weighted shifts are handled by rule, with symbol-level checks for
the periodic case.
"""

__version__ = "0.1.0"

from .config import DEFAULT, ToleranceConfig  # noqa: E402
from .classify import (  # noqa: E402
    classify_descriptor,
    classify_matrix_operator,
    classify_normal_finite,
    classify_scalar_block,
    classify_selfadjoint,
    norm_drop_certificate,
    verify_certificate,
)
from .numrange import numerical_radius, numrange_sweep  # noqa: E402
from .structure import decompose_irreducible  # noqa: E402

__all__ = [
    "DEFAULT",
    "ToleranceConfig",
    "classify_descriptor",
    "classify_matrix_operator",
    "classify_normal_finite",
    "classify_scalar_block",
    "classify_selfadjoint",
    "decompose_irreducible",
    "norm_drop_certificate",
    "numerical_radius",
    "numrange_sweep",
    "verify_certificate",
]
