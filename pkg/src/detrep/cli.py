"""Command-line front end: ``detrep build|verify|solve|bench``.

Exit codes: 0 success, 2 unreadable or invalid input, 3 unsupported
degree, 4 numerical failure (or a result outside tolerance), 5 singular
two-parameter problem.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import FIELDS, SCENARIOS, BenchConfig, run_bench
from .conics import RANK_TOL
from .errors import DegenerateInput, DetRepError, ParseError, SingularDelta0, UnsupportedDegree
from .polyio import complex_to_json, matrix_from_json, matrix_to_json, read_poly
from .polycore import homogenize
from .representation import BuildOptions, build, verify
from .twopar import accuracy_metric, solve_system

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DEGREE = 3
EXIT_NUMERIC = 4
EXIT_SINGULAR = 5

#: build and verify succeed only below this residual
REP_TOL = 1e-7
#: solve succeeds only when every non-clustered root has residuals below this
ROOT_TOL = 1e-6


def _emit(obj, out):
    text = json.dumps(obj, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fail(code, msg):
    print(f"detrep: error: {msg}", file=sys.stderr)
    return code


def cmd_build(args):
    p = read_poly(args.input)
    rep = build(p, BuildOptions(seed=args.seed, rank_tol=args.tol_rank))
    residual = verify(rep.poly, rep, args.samples, args.seed)
    A1, B1, C1 = rep.affine()
    _emit(
        {
            "degree": rep.n,
            "structure": rep.structure.value,
            "residual": residual,
            "transforms": len(rep.transform_trail),
            "homogeneous": {"A": matrix_to_json(rep.A), "B": matrix_to_json(rep.B), "C": matrix_to_json(rep.C)},
            "affine": {"A1": matrix_to_json(A1), "B1": matrix_to_json(B1), "C1": matrix_to_json(C1)},
        },
        args.out,
    )
    if residual > REP_TOL:
        return _fail(EXIT_NUMERIC, f"verification residual {residual:.3e} exceeds {REP_TOL:g}")
    return EXIT_OK


def cmd_verify(args):
    p = read_poly(args.input)
    try:
        obj = json.loads(Path(args.rep).read_text())
        mats = obj["homogeneous"]
        M = np.stack([matrix_from_json(mats[k]) for k in ("A", "B", "C")])
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"cannot read representation {args.rep}: {exc}") from None
    try:
        residual = verify(homogenize(p.trimmed()), M, args.samples, args.seed)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    _emit({"residual": residual, "samples": args.samples, "seed": args.seed, "ok": residual <= REP_TOL}, args.out)
    return EXIT_OK if residual <= REP_TOL else EXIT_NUMERIC


def cmd_solve(args):
    p = read_poly(args.p)
    q = read_poly(args.q)
    rs = solve_system(p, q, BuildOptions(seed=args.seed, rank_tol=args.tol_rank))
    acc = accuracy_metric(p, q, rs) if len(rs) else None
    roots = [
        {
            "x": complex_to_json(x),
            "y": complex_to_json(y),
            "residual_p": float(rs.residuals[k, 0]),
            "residual_q": float(rs.residuals[k, 1]),
            "condition": None if not np.isfinite(rs.condition[k]) else float(rs.condition[k]),
            "backward_error": float(rs.backward[k]),
            "flag": rs.flags[k],
        }
        for k, (x, y) in enumerate(rs.roots)
    ]
    _emit(
        {
            "roots": roots,
            "dropped": rs.dropped,
            "accuracy": None if acc is None else acc.accuracy,
            "forward_error_estimate": None if acc is None else acc.forward_error_estimate,
            "unreliable": 0 if acc is None else acc.excluded,
        },
        args.out,
    )
    bad = [r for r in roots if r["flag"] != "clustered" and max(r["residual_p"], r["residual_q"]) > ROOT_TOL]
    if bad:
        return _fail(EXIT_NUMERIC, f"{len(bad)} root(s) with residual above {ROOT_TOL:g}")
    return EXIT_OK


def cmd_bench(args):
    config = BenchConfig(
        degrees=tuple(args.degrees),
        samples=args.samples,
        field=args.field,
        seed=args.seed,
        scenario=args.scenario,
        rank_tol=args.tol_rank,
        timing=not args.no_timing,
    )
    report = run_bench(config, workers=args.workers)
    if args.out:
        Path(args.out).write_text(report.to_json())
    sys.stdout.write(report.table())
    return EXIT_OK


def make_parser():
    parser = argparse.ArgumentParser(
        prog="detrep", description="Determinantal representations of plane curves and bivariate system solving."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, samples=100):
        sp.add_argument("--seed", type=int, default=0, help="seed for coordinate changes and sampling")
        sp.add_argument("--tol-rank", type=float, default=RANK_TOL, help="relative rank threshold for conics")
        sp.add_argument("--samples", type=int, default=samples, help="number of random samples")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("build", help="build a representation det(xA + yB + zC) = p")
    sp.add_argument("input", help="polynomial file (text or JSON)")
    common(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("verify", help="check a representation written by 'build'")
    sp.add_argument("input", help="polynomial file")
    sp.add_argument("rep", help="representation JSON")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("solve", help="common roots of two polynomials")
    sp.add_argument("p", help="first polynomial file")
    sp.add_argument("q", help="second polynomial file")
    common(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("bench", help="benchmark on random systems")
    common(sp, samples=500)
    sp.add_argument("--degrees", type=int, nargs="+", default=[3, 4, 5])
    sp.add_argument("--field", choices=FIELDS, default="real")
    sp.add_argument("--scenario", choices=SCENARIOS, default="full")
    sp.add_argument("--workers", type=int, default=1, help="worker processes")
    sp.add_argument("--no-timing", action="store_true", help="omit timings (reports become byte-identical)")
    sp.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, DegenerateInput) as exc:
        return _fail(EXIT_PARSE, str(exc))
    except UnsupportedDegree as exc:
        return _fail(EXIT_DEGREE, str(exc))
    except SingularDelta0 as exc:
        return _fail(EXIT_SINGULAR, str(exc))
    except ValueError as exc:
        if args.command == "bench":
            return _fail(EXIT_PARSE, str(exc))
        return _fail(EXIT_NUMERIC, str(exc))
    except (DetRepError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERIC, f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
