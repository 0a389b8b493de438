"""Boundary-representation statuses and C*-envelope / Shilov-ideal verdicts.

All evidence payloads are JSON-native (dicts, lists, str, int, float, bool,
None); complex numbers are stored as ``[re, im]`` pairs.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar


class Status(Enum):
    BOUNDARY = "boundary"
    NOT_BOUNDARY = "not_boundary"
    REQUIRED = "required_by_norm_certificate"
    UNDETERMINED = "undetermined"


@dataclass
class BoundaryStatus:
    rep_id: object  # block index, or a tag such as "circle"
    status: Status
    evidence: dict = field(default_factory=dict)

    def to_json(self):
        return {"rep_id": self.rep_id, "status": self.status.value, "evidence": self.evidence}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["rep_id"], Status(obj["status"]), obj.get("evidence", {}))


def cj(z):
    """Complex number as a JSON pair."""
    z = complex(z)
    return [z.real, z.imag]


def from_cj(pair):
    return complex(pair[0], pair[1])


# envelope shapes


@dataclass(frozen=True)
class FullMatrixAlgebra:
    n: int
    kind: ClassVar[str] = "full_matrix_algebra"

    def payload(self):
        return {"n": self.n}


@dataclass(frozen=True)
class BlockSum:
    dims: tuple
    kind: ClassVar[str] = "block_sum"

    def payload(self):
        return {"block_sum": list(self.dims)}


@dataclass(frozen=True)
class FiniteFunctionAlgebra:
    points: tuple
    kind: ClassVar[str] = "finite_function_algebra"

    def payload(self):
        return {"points": [cj(z) for z in self.points]}


@dataclass(frozen=True)
class ContinuousOnCircle:
    kind: ClassVar[str] = "continuous_on_circle"

    def payload(self):
        return {}


@dataclass(frozen=True)
class CircleMatrices:
    p: int
    kind: ClassVar[str] = "circle_matrices"

    def payload(self):
        return {"p": self.p}


@dataclass(frozen=True)
class TwoPoints:
    points: tuple = ()
    kind: ClassVar[str] = "two_points"

    def payload(self):
        return {"points": [float(t) for t in self.points]}


@dataclass(frozen=True)
class Undetermined:
    reason: str = ""
    kind: ClassVar[str] = "undetermined"

    def payload(self):
        return {"reason": self.reason}


def _shape_from_json(obj):
    kind = obj["shape"]
    if kind == "full_matrix_algebra":
        return FullMatrixAlgebra(obj["n"])
    if kind == "block_sum":
        return BlockSum(tuple(obj["block_sum"]))
    if kind == "finite_function_algebra":
        return FiniteFunctionAlgebra(tuple(from_cj(z) for z in obj["points"]))
    if kind == "continuous_on_circle":
        return ContinuousOnCircle()
    if kind == "circle_matrices":
        return CircleMatrices(obj["p"])
    if kind == "two_points":
        return TwoPoints(tuple(obj["points"]))
    if kind == "undetermined":
        return Undetermined(obj.get("reason", ""))
    raise ValueError(f"unknown envelope shape {kind!r}")


# Shilov ideal


@dataclass(frozen=True)
class Trivial:
    kind: ClassVar[str] = "trivial"


@dataclass(frozen=True)
class DroppedBlocks:
    indices: tuple
    kind: ClassVar[str] = "dropped_blocks"


@dataclass(frozen=True)
class CompactOperators:
    kind: ClassVar[str] = "compact_operators"


@dataclass(frozen=True)
class UndeterminedShilov:
    kind: ClassVar[str] = "undetermined"


@dataclass
class EnvelopeVerdict:
    shape: object
    shilov: object
    simplicity_flag: bool = False
    evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.shape, Undetermined) and not isinstance(self.shilov, UndeterminedShilov):
            raise ValueError("an undetermined shape forces an undetermined Shilov ideal")

    @property
    def determined(self):
        return not isinstance(self.shape, Undetermined)

    def to_json(self):
        out = {"shape": self.shape.kind}
        out.update(self.shape.payload())
        out["shilov"] = self.shilov.kind
        if isinstance(self.shilov, DroppedBlocks):
            out["dropped_blocks"] = list(self.shilov.indices)
        out["simplicity_flag"] = bool(self.simplicity_flag)
        out["evidence"] = self.evidence
        return out

    @classmethod
    def from_json(cls, obj):
        kind = obj["shilov"]
        shilov = {
            "trivial": Trivial(),
            "compact_operators": CompactOperators(),
            "undetermined": UndeterminedShilov(),
        }.get(kind)
        if kind == "dropped_blocks":
            shilov = DroppedBlocks(tuple(obj["dropped_blocks"]))
        if shilov is None:
            raise ValueError(f"unknown Shilov description {kind!r}")
        return cls(_shape_from_json(obj), shilov, bool(obj["simplicity_flag"]), obj.get("evidence", {}))
