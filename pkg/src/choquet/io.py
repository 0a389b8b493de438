"""JSON descriptors in, JSON reports and CSV polygons out."""

import json
import math
import numbers
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .config import ToleranceConfig
from .descriptors import (
    FULL_CIRCLE,
    DirectSum,
    ExplicitMatrix,
    FiniteShift,
    NormalFinite,
    PeriodicShift,
    UnilateralShift,
    Unitary,
)
from .envelope import BoundaryStatus, EnvelopeVerdict, cj
from .errors import ParseError, ValidationError
from .linalg import MAX_DIM

# ------------------------------------------------------------------ parsing

_KEYS = {
    "matrix": {"data"},
    "direct_sum": {"blocks"},
    "finite_shift": {"weights"},
    "periodic_shift": {"weights"},
    "unilateral_shift": set(),
    "unitary": {"spectrum"},
    "normal": {"eigenvalues"},
}


def _number(x, path):
    if isinstance(x, bool) or not isinstance(x, numbers.Real):
        raise ParseError("expected a number", path)
    if not math.isfinite(x):
        raise ValidationError("number must be finite", path)
    return float(x)


def _complex(x, path):
    if not isinstance(x, list) or len(x) != 2:
        raise ParseError("expected a complex number [re, im]", path)
    return complex(_number(x[0], f"{path}[0]"), _number(x[1], f"{path}[1]"))


def _list(x, path, what="list"):
    if not isinstance(x, list):
        raise ParseError(f"expected a {what}", path)
    return x


def _nonempty(x, path):
    if not x:
        raise ValidationError("list must be nonempty", path)
    return x


def _descriptor(obj, path):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", path)
    kind = obj.get("type")
    if not isinstance(kind, str):
        raise ParseError('missing string field "type"', path)
    if kind not in _KEYS:
        raise ParseError(f"unknown descriptor type {kind!r}", f"{path}.type")
    extra = set(obj) - _KEYS[kind] - {"type"}
    if extra:
        raise ParseError(f"unexpected field {sorted(extra)[0]!r}", path)
    missing = _KEYS[kind] - set(obj)
    if missing:
        raise ParseError(f"missing field {sorted(missing)[0]!r}", path)

    if kind == "matrix":
        p = f"{path}.data"
        rows = _nonempty(_list(obj["data"], p), p)
        n = len(rows)
        if n > MAX_DIM:
            raise ValidationError(f"dimension {n} exceeds supported size {MAX_DIM}", p)
        M = np.empty((n, n), dtype=complex)
        for i, row in enumerate(rows):
            rp = f"{p}[{i}]"
            _list(row, rp, "row")
            if len(row) != n:
                raise ValidationError(f"matrix is not square: row has {len(row)} entries, expected {n}", rp)
            for j, z in enumerate(row):
                M[i, j] = _complex(z, f"{rp}[{j}]")
        return ExplicitMatrix(M)
    if kind == "direct_sum":
        p = f"{path}.blocks"
        blocks = _nonempty(_list(obj["blocks"], p), p)
        return DirectSum(tuple(_descriptor(b, f"{p}[{i}]") for i, b in enumerate(blocks)))
    if kind == "finite_shift":
        p = f"{path}.weights"
        w = [_complex(z, f"{p}[{i}]") for i, z in enumerate(_nonempty(_list(obj["weights"], p), p))]
        for i, z in enumerate(w):
            if z == 0:
                raise ValidationError("finite shift weights must be nonzero", f"{p}[{i}]")
        if len(w) + 1 > MAX_DIM:
            raise ValidationError(f"dimension {len(w) + 1} exceeds supported size {MAX_DIM}", p)
        return FiniteShift(tuple(w))
    if kind == "periodic_shift":
        p = f"{path}.weights"
        w = [_number(x, f"{p}[{i}]") for i, x in enumerate(_nonempty(_list(obj["weights"], p), p))]
        for i, x in enumerate(w):
            if x <= 0:
                raise ValidationError("periodic shift weights must be strictly positive", f"{p}[{i}]")
        return PeriodicShift(tuple(w))
    if kind == "unilateral_shift":
        return UnilateralShift()
    if kind == "unitary":
        p = f"{path}.spectrum"
        spec = obj["spectrum"]
        if spec == FULL_CIRCLE:
            return Unitary(FULL_CIRCLE)
        if isinstance(spec, str):
            raise ParseError('spectrum must be "circle" or a list of points', p)
        pts = [_complex(z, f"{p}[{i}]") for i, z in enumerate(_nonempty(_list(spec, p), p))]
        for i, z in enumerate(pts):
            if abs(abs(z) - 1.0) > 1e-12:
                raise ValidationError("unitary spectrum points must be unimodular", f"{p}[{i}]")
        return Unitary(tuple(pts))
    p = f"{path}.eigenvalues"
    ev = [_complex(z, f"{p}[{i}]") for i, z in enumerate(_nonempty(_list(obj["eigenvalues"], p), p))]
    return NormalFinite(tuple(ev))


def parse_descriptor(text):
    """Operator descriptor from UTF-8 JSON text (or bytes)."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return _descriptor(obj, "$")


def descriptor_to_json(d):
    if isinstance(d, ExplicitMatrix):
        return {"type": "matrix", "data": [[cj(z) for z in row] for row in d.data]}
    if isinstance(d, DirectSum):
        return {"type": "direct_sum", "blocks": [descriptor_to_json(b) for b in d.blocks]}
    if isinstance(d, FiniteShift):
        return {"type": "finite_shift", "weights": [cj(z) for z in d.weights]}
    if isinstance(d, PeriodicShift):
        return {"type": "periodic_shift", "weights": list(d.weights)}
    if isinstance(d, UnilateralShift):
        return {"type": "unilateral_shift"}
    if isinstance(d, Unitary):
        return {"type": "unitary", "spectrum": FULL_CIRCLE if d.full_circle else [cj(z) for z in d.spectrum]}
    if isinstance(d, NormalFinite):
        return {"type": "normal", "eigenvalues": [cj(z) for z in d.eigenvalues]}
    raise TypeError(f"cannot serialize {type(d).__name__}")


# ---------------------------------------------------------------- reports


@dataclass
class ReportDocument:
    command: str
    input: dict
    config: dict
    statuses: list = field(default_factory=list)
    verdict: EnvelopeVerdict = None
    evidence: dict = field(default_factory=dict)
    tool_version: str = __version__

    @property
    def rng_seed(self):
        return self.config.get("rng_seed")

    def to_json(self):
        return {
            "tool_version": self.tool_version,
            "command": self.command,
            "rng_seed": self.rng_seed,
            "config": self.config,
            "input": self.input,
            "statuses": [s.to_json() for s in self.statuses],
            "verdict": None if self.verdict is None else self.verdict.to_json(),
            "evidence": self.evidence,
        }

    @classmethod
    def from_json(cls, obj):
        verdict = obj.get("verdict")
        return cls(
            command=obj["command"],
            input=obj["input"],
            config=obj["config"],
            statuses=[BoundaryStatus.from_json(s) for s in obj.get("statuses", [])],
            verdict=None if verdict is None else EnvelopeVerdict.from_json(verdict),
            evidence=obj.get("evidence", {}),
            tool_version=obj["tool_version"],
        )

    def tolerance_config(self):
        return ToleranceConfig(**self.config)


def _fmt_float(x):
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {x!r} cannot be written to a report")
    s = "%.17g" % x
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, numbers.Integral):
        return str(int(obj))
    if isinstance(obj, numbers.Real):
        return _fmt_float(float(obj))
    if isinstance(obj, numbers.Complex):
        return _encode(cj(obj), indent, level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (numbers.Number, str, type(None))) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent=2):
    """Deterministic JSON: insertion-ordered keys, floats to 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def emit_report(doc):
    return dumps(doc.to_json())


def parse_report(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed report JSON: {exc.msg}") from exc
    return ReportDocument.from_json(obj)


# -------------------------------------------------------------------- CSV


def _csv(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt_csv(v) for v in row) for row in rows)
    return "\r\n".join(lines) + "\r\n"


def _fmt_csv(v):
    if isinstance(v, numbers.Integral):
        return str(int(v))
    return "%.17g" % float(v)


def emit_polygon_csv(nr):
    """One row per sweep direction: theta, support value, boundary point."""
    rows = [(t, s, z.real, z.imag) for t, s, z in zip(nr.angles, nr.support_values, nr.points)]
    return _csv(["theta", "support", "re", "im"], rows)


def emit_polygon_family_csv(lams, sweeps):
    """Polygon family, one block of rows per lambda."""
    rows = []
    for i, (lam, nr) in enumerate(zip(lams, sweeps)):
        lam = complex(lam)
        rows.extend((i, lam.real, lam.imag, t, s, z.real, z.imag)
                    for t, s, z in zip(nr.angles, nr.support_values, nr.points))
    return _csv(["lambda_index", "lambda_re", "lambda_im", "theta", "support", "re", "im"], rows)
