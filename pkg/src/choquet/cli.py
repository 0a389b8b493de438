"""Command-line interface.

    choquet numrange FILE       polygon CSV (radius on stderr) or JSON
    choquet classify FILE       boundary statuses and envelope verdict
    choquet shift-verify FILE   symbol-level checks for a periodic shift
    choquet decompose FILE      irreducible block decomposition

Exit codes: 0 success, 1 input error, 2 numeric failure, 3 undetermined verdict.
"""

import argparse
import sys

import numpy as np

from . import __version__
from .classify import classify_descriptor
from .config import DEFAULT
from .descriptors import PeriodicShift, is_finite, to_matrix
from .envelope import cj
from .errors import InputError, NumericError
from .io import (
    ReportDocument,
    descriptor_to_json,
    dumps,
    emit_polygon_csv,
    emit_polygon_family_csv,
    emit_report,
    parse_descriptor,
)
from .numrange import TWO_PI, numrange_sweep
from .shifts import (
    DEFAULT_GRID,
    normalize_spec,
    periodic_envelope_verdict,
    symbol_polygons,
)
from .structure import commutant_dimension, decompose_irreducible

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_UNDETERMINED = 0, 1, 2, 3


def build_parser():
    ap = argparse.ArgumentParser(prog="choquet", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"choquet {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fmt in [("numrange", "csv"), ("classify", "json"), ("shift-verify", "json"), ("decompose", "json")]:
        p = sub.add_parser(name)
        p.add_argument("file", help="JSON operator descriptor ('-' for stdin)")
        p.add_argument("--angles", type=int, default=DEFAULT.angle_count, help="sweep directions")
        p.add_argument("--seed", type=int, default=DEFAULT.rng_seed, help="random seed")
        p.add_argument("--tol-hull", type=float, default=DEFAULT.eps_hull, help="geometric band width")
        p.add_argument("--tol-eig", type=float, default=DEFAULT.eps_eig, help="eigensolver tolerance")
        p.add_argument("--grid", type=int, default=DEFAULT_GRID, help="lambda grid for periodic shifts")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=["json", "csv"], default=fmt)
    return ap


def _config(args):
    try:
        return DEFAULT.replace(angle_count=args.angles, rng_seed=args.seed,
                               eps_hull=args.tol_hull, eps_eig=args.tol_eig)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _read(path):
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _finite_matrix(d, command):
    if not is_finite(d):
        raise InputError(f"{command} needs a finite-dimensional operator")
    return to_matrix(d)


def _numrange(d, cfg, args):
    T = _finite_matrix(d, "numrange")
    nr = numrange_sweep(T, cfg)
    if args.format == "csv":
        print(f"numerical radius: {nr.radius!r}", file=sys.stderr)
        return emit_polygon_csv(nr), EXIT_OK
    doc = {
        "tool_version": __version__,
        "command": "numrange",
        "rng_seed": cfg.rng_seed,
        "config": cfg.to_dict(),
        "input": descriptor_to_json(d),
        "radius": nr.radius,
        "shape": nr.polygon.shape.value,
        "polygon": [cj(z) for z in nr.polygon.vertices],
        "samples": [[t, s, z.real, z.imag] for t, s, z in zip(nr.angles, nr.support_values, nr.points)],
    }
    return dumps(doc), EXIT_OK


def _classify(d, cfg, args):
    statuses, verdict = classify_descriptor(d, cfg)
    doc = ReportDocument("classify", descriptor_to_json(d), cfg.to_dict(), statuses, verdict, {})
    return emit_report(doc), EXIT_OK if verdict.determined else EXIT_UNDETERMINED


def _shift_verify(d, cfg, args):
    if not isinstance(d, PeriodicShift):
        raise InputError("shift-verify needs a periodic_shift descriptor")
    spec = normalize_spec(d.weights)
    if args.format == "csv":
        lams = np.exp(1j * TWO_PI * np.arange(args.grid) / args.grid)
        return emit_polygon_family_csv(lams, symbol_polygons(spec, lams, cfg)), EXIT_OK
    verdict = periodic_envelope_verdict(spec, cfg, grid_size=args.grid)
    ev = {"spec": {"weights": list(spec.weights), "p": spec.p, "distinct": spec.distinct_flag,
                   "omega": cj(spec.omega)}}
    doc = ReportDocument("shift-verify", descriptor_to_json(d), cfg.to_dict(), [], verdict, ev)
    return emit_report(doc), EXIT_OK if verdict.determined else EXIT_UNDETERMINED


def _decompose(d, cfg, args):
    T = _finite_matrix(d, "decompose")
    dec = decompose_irreducible(T, cfg)
    ev = {
        "block_dims": list(dec.block_dims),
        "blocks": [[[cj(z) for z in row] for row in B] for B in dec.blocks],
        "change_of_basis": [[cj(z) for z in row] for row in dec.change_of_basis],
        "residual": dec.residual(T),
        "commutant_dimension": commutant_dimension(T, cfg),
    }
    doc = ReportDocument("decompose", descriptor_to_json(d), cfg.to_dict(), [], None, ev)
    return emit_report(doc), EXIT_OK


_COMMANDS = {"numrange": _numrange, "classify": _classify, "shift-verify": _shift_verify,
             "decompose": _decompose}


def run(argv=None):
    """Parse arguments and execute; returns (output text or None, exit code)."""
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        if args.grid < 8:
            raise InputError("--grid must be at least 8")
        d = parse_descriptor(_read(args.file))
        text, code = _COMMANDS[args.command](d, cfg, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return None, EXIT_INPUT
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return None, EXIT_NUMERIC
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text, code


def main(argv=None):
    return run(argv)[1]


if __name__ == "__main__":
    sys.exit(main())
