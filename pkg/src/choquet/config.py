"""Numerical tolerances and search budgets."""

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances and budgets threaded through every computation.

    eps_herm   relative Hermiticity tolerance
    eps_eig    eigensolver convergence / nullity threshold
    eps_hull   relative width of the geometric boundary band
    angle_count number of equispaced support directions
    cert_budget norm evaluations per certificate search
    rng_seed   seed for every randomized search
    """

    eps_herm: float = 1e-10
    eps_eig: float = 1e-10
    eps_hull: float = 1e-5
    angle_count: int = 720
    cert_budget: int = 2000
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("eps_herm", "eps_eig", "eps_hull"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.angle_count < 16:
            raise ValueError("angle_count must be at least 16")
        if self.cert_budget < 1:
            raise ValueError("cert_budget must be positive")
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")

    def replace(self, **changes):
        return ToleranceConfig(**{**asdict(self), **changes})

    def to_dict(self):
        return asdict(self)


DEFAULT = ToleranceConfig()
