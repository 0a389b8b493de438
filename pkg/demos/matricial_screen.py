"""Sample W_2(T) for a random 3 x 3 matrix and screen a few candidate points."""

import numpy as np

from choquet.config import DEFAULT
from choquet.matricial import matrix_extreme_screen, ucp_sample

rng = np.random.default_rng(3)
T = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
cfg = DEFAULT.replace(rng_seed=3)

level1 = ucp_sample(T, 1, 400, cfg)
level2 = ucp_sample(T, 2, 200, cfg)

# a compression to a 2-dimensional subspace, and the midpoint of two samples
V = np.linalg.qr(rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2)))[0]
candidates = {
    "compression": V.conj().T @ T @ V,
    "midpoint": 0.5 * (level2.samples[5] + level2.samples[17]),
}
for name, Lam in candidates.items():
    out = matrix_extreme_screen(Lam, [level1, level2], cfg)
    line = f"{name:<12} {out.result.value:<18} after {out.evaluations} evaluations"
    if out.witness is not None:
        w = out.witness
        line += f", {len(w.omegas)} summands, residual {np.linalg.norm(w.reconstruct() - Lam):.1e}"
    print(line)
