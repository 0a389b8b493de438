"""Symbol-level evidence for a periodic weighted shift with weights (1, 2, 3)."""

import numpy as np

from choquet.shifts import (
    circle_extreme_check,
    normalize_spec,
    periodic_envelope_verdict,
    radius_constancy_check,
    truncation,
)
from choquet.numrange import numerical_radius

spec = normalize_spec((1, 2, 3))
r, dev = radius_constancy_check(spec)
print(f"radius of Omega_lambda: {r:.12f} (max deviation over 360 lambdas {dev:.1e})")

for zeta in [1, 1j, np.exp(2.0j)]:
    pts = circle_extreme_check(spec, zeta, r=r)
    print(f"zeta={complex(zeta):.3f}: extreme points on r*T at angles",
          np.round(np.angle(pts), 6))

# finite sections creep up to the symbol radius from below
for N in [3, 6, 12, 24, 48]:
    print(f"N={N:>3}  w(T_N) = {numerical_radius(truncation(spec, N)):.6f}")

v = periodic_envelope_verdict(spec)
print("verdict:", v.shape, "shilov:", v.shilov, "failed checks:", v.evidence.get("failed_checks", []))
