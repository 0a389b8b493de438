"""Walk the scalar weight of T = [[0,1],[0,0]] (+) [lam] across |lam| = 1/2.

Below the threshold the scalar sits inside the disc W(J) and its character
is dropped; above it the character survives and the envelope gains a summand.
"""

import numpy as np

from choquet import classify_matrix_operator


def jordan_plus(lam):
    T = np.zeros((3, 3), dtype=complex)
    T[0, 1] = 1.0
    T[2, 2] = lam
    return T


for lam in [0.0, 0.25, 0.5, 0.5 + 1e-3, 0.75, 1.0, 2j]:
    statuses, verdict = classify_matrix_operator(jordan_plus(lam))
    scalar = statuses[0]
    print(f"lam={lam!s:>8}  scalar block: {scalar.status.value:<14} "
          f"distance {scalar.evidence['hull_distance']:+.4f}  ->  {verdict.shape}, "
          f"shilov {verdict.shilov}")
