"""Command-line front end: ``polarevans eval|scan|contour|compare``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 unresolved
winding (refinement depth exceeded).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .analysis import ContourSpec, compare_methods, evaluate_contour, scan_real
from .continuation import continue_frames
from .errors import (
    EvansError,
    NumericalFailure,
    ParameterError,
    RefinementDepthExceeded,
)
from .evans import VARIANTS, SchemeConfig, evaluate
from .systems import make_system

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_WINDING = 0, 2, 3, 4

CONTOUR_COLUMNS = [
    "index", "t", "re_lambda", "im_lambda", "re_D", "im_D", "abs_D", "arg_D",
    "mesh_minus", "mesh_plus", "stiefel_minus", "stiefel_plus",
]
SCAN_COLUMNS = ["lambda", "re_D", "im_D"]
COMPARE_COLUMNS = ["Method", "c", "stiefel_err", "mesh", "time", "abs", "rel"]


class InputError(EvansError, ValueError):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``"0.16"``, ``"40i"``, ``"0.16+40i"``, ``"-1-2.5i"``."""
    s = text.strip().replace(" ", "")
    if not s or "j" in s.lower():
        raise InputError(f"malformed complex number {text!r}")
    try:
        z = complex(s.replace("i", "j"))
    except ValueError:
        raise InputError(f"malformed complex number {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InputError(f"complex number {text!r} is not finite")
    return z


def parse_method(text: str, abs_tol=1e-8, rel_tol=1e-6) -> SchemeConfig:
    """``name[:c]`` with dashes or underscores, e.g. ``damped-davey:5``."""
    name, _, c = text.strip().partition(":")
    variant = name.replace("-", "_")
    if variant not in VARIANTS:
        raise InputError(f"unknown method {name!r}")
    try:
        c_val = float(c) if c else 0.0
    except ValueError:
        raise InputError(f"bad damping constant in {text!r}") from None
    try:
        return SchemeConfig(variant, c_val, abs_tol, rel_tol)
    except ParameterError as exc:
        raise InputError(str(exc)) from None


def _parse_params(items):
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InputError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            params[key] = float(value)
        except ValueError:
            params[key] = value
    return params


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


class _Output:
    def __init__(self, args):
        self.fmt = args.format
        self.path = args.out

    def write(self, text):
        if self.path:
            with open(self.path, "w", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _csv_text(header, rows, trailer=()):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    for line in trailer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def _sample_dict(s, index=None, t=None):
    d = {} if index is None else {"index": index, "t": float(t)}
    d.update(
        re_lambda=float(s.lam.real),
        im_lambda=float(s.lam.imag),
        re_D=float(s.D.real),
        im_D=float(s.D.imag),
        abs_D=float(abs(s.D)),
        arg_D=float(np.angle(s.D)),
        mesh_minus=int(s.mesh_minus),
        mesh_plus=int(s.mesh_plus),
        stiefel_minus=float(s.stiefel_minus),
        stiefel_plus=float(s.stiefel_plus),
    )
    return d


def _problem(args):
    try:
        return make_system(args.system, _parse_params(args.param), args.M)
    except ParameterError as exc:
        raise InputError(str(exc)) from None


def cmd_eval(args):
    problem = _problem(args)
    lam = parse_complex(args.lam)
    config = parse_method(args.method, args.abs_tol, args.rel_tol)
    fm = continue_frames(problem, [lam], "minus")[0]
    fp = continue_frames(problem, [lam], "plus")[0]
    sample = evaluate(problem, lam, config, (fm, fp))
    record = _sample_dict(sample)
    record["method"] = config.label
    if args.format == "json":
        return json.dumps(record, indent=2) + "\n"
    header = list(record)
    return _csv_text(header, [[_fmt(v) if not isinstance(v, str) else v for v in record.values()]])


def cmd_scan(args):
    problem = _problem(args)
    if not args.to > getattr(args, "from"):
        raise InputError("scan interval must satisfy --from < --to")
    config = parse_method(args.method, args.abs_tol, args.rel_tol)
    result = scan_real(problem, getattr(args, "from"), args.to, args.points, config)
    values = result.values
    if args.format == "json":
        doc = {
            "samples": [
                {"lambda": float(l), "re_D": float(v.real), "im_D": float(v.imag)}
                for l, v in zip(result.lambdas, values)
            ],
            "brackets": [list(b) for b in result.brackets],
            "roots": result.roots,
        }
        return json.dumps(doc, indent=2) + "\n"
    rows = [[_fmt(l), _fmt(v.real), _fmt(v.imag)] for l, v in zip(result.lambdas, values)]
    return _csv_text(SCAN_COLUMNS, rows, [f"root={_fmt(r)}" for r in result.roots])


def cmd_contour(args):
    problem = _problem(args)
    spec = ContourSpec(parse_complex(args.center), args.radius, args.points)
    config = parse_method(args.method, args.abs_tol, args.rel_tol)
    result = evaluate_contour(problem, spec, config)
    records = [_sample_dict(s, i, t) for i, (s, t) in enumerate(zip(result.samples, result.ts))]
    if args.format == "json":
        doc = {"samples": records, "winding": result.winding, "refinements": result.refinements}
        return json.dumps(doc, indent=2) + "\n"
    rows = [[_fmt(r[c]) for c in CONTOUR_COLUMNS] for r in records]
    return _csv_text(
        CONTOUR_COLUMNS, rows, [f"winding={result.winding}", f"refinements={result.refinements}"]
    )


def cmd_compare(args):
    problem = _problem(args)
    spec = ContourSpec(parse_complex(args.center), args.radius, args.points)
    methods = [parse_method(m, args.abs_tol, args.rel_tol) for m in args.methods.split(",") if m]
    if not methods:
        raise InputError("--methods needs at least one method")
    rows = compare_methods(problem, spec, methods)
    records = []
    for config, row in zip(methods, rows):
        records.append({
            "Method": config.label.split(":")[0],
            "c": row.c,
            "stiefel_err": row.stiefel_err,
            "mesh": row.mesh,
            "time": None if args.no_timing else round(row.time_seconds, 3),
            "abs": row.abs_diff,
            "rel": row.rel_diff,
        })
    if args.format == "json":
        return json.dumps(records, indent=2) + "\n"
    out = [
        [r["Method"]] + ["" if r[c] is None else _fmt(r[c]) for c in COMPARE_COLUMNS[1:]]
        for r in records
    ]
    return _csv_text(COMPARE_COLUMNS, out)


def _common(p):
    p.add_argument("--system", default="boussinesq")
    p.add_argument("--param", action="append", metavar="KEY=VALUE", help="system parameter, e.g. s=0.4")
    p.add_argument("--M", type=float, default=None, help="numerical infinity")
    p.add_argument("--abs-tol", type=float, default=1e-8)
    p.add_argument("--rel-tol", type=float, default=1e-6)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(prog="polarevans", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="Evans function at one lambda")
    _common(p)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--method", default="drury")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", help="real-axis scan with root bracketing")
    _common(p)
    p.add_argument("--from", dest="from", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--method", default="drury")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("contour", help="Evans function around a circle and its winding number")
    _common(p)
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--method", default="drury")
    p.set_defaults(func=cmd_contour)

    p = sub.add_parser("compare", help="compare schemes against an exterior-product reference")
    _common(p)
    p.add_argument("--methods", required=True, help="comma list of name[:c]")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=float, required=True)
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--no-timing", action="store_true", help="leave the time column empty")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = args.func(args)
    except RefinementDepthExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WINDING
    except NumericalFailure as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, EvansError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _Output(args).write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
