"""Command-line front end.

Exit codes: 0 pass/success, 1 property violation, 2 input or configuration
error, 3 numerical or singular-state error.  Results go to stdout (or
``--out``) as JSON; diagnostics go to stderr.
"""

import argparse
import json
import sys

import numpy as np

from . import fop
from .divergence import PATHS, chi2
from .errors import DomainError, NumericError, SingularStateError
from .harness import (
    CONTRACTION_TOL,
    CONVEXITY_TOL,
    DEFAULT_LAMBDA_GRID,
    QUAD_INV_TOL,
    contraction_scan,
    convexity_scan,
    family_scan,
    quadratic_inverse_convexity_scan,
    trial_rng,
)
from .linalg import load_density

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
REPR_TOL = 1e-8


class InputError(Exception):
    pass


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _emit(payload, out):
    text = json.dumps(payload, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _warn(msg):
    print(f"qchi2: {msg}", file=sys.stderr)


def _function(spec):
    try:
        return fop.parse_function_spec(spec)
    except DomainError as exc:
        raise InputError(f"--f {spec}: {exc}") from exc


def cmd_eval(args):
    func = _function(args.f)
    try:
        rho = load_density(args.rho)
        sigma = load_density(args.sigma)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    if rho.n != sigma.n:
        raise InputError(f"{args.rho} is {rho.n}x{rho.n} but {args.sigma} is {sigma.n}x{sigma.n}")
    try:
        value = chi2(func, rho, sigma, path=args.path)
    except SingularStateError as exc:
        raise SingularStateError(f"{args.sigma}: {exc}") from exc
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    _emit({"chi2": value.value, "f": args.f, "path": value.path}, args.out)
    return EXIT_OK


def cmd_scan(args):
    kind = args.kind
    if args.trials == 0:
        _warn("--trials 0: empty scan, passes vacuously")
    grid = args.lambda_grid if args.lambda_grid is not None else list(DEFAULT_LAMBDA_GRID)
    if not grid or min(grid) < 0 or max(grid) > 1:
        raise InputError("--lambda-grid must be non-empty and lie in [0, 1]")
    try:
        if kind == "convexity":
            report = convexity_scan(_function(args.f), args.n, args.trials, grid, args.seed,
                                    args.tol or CONVEXITY_TOL, workers=args.workers)
        elif kind == "contraction":
            report = contraction_scan(_function(args.f), args.n, args.trials, args.seed,
                                      args.env_dims, tol=args.tol or CONTRACTION_TOL,
                                      workers=args.workers)
        elif kind == "quadratic-inverse":
            report = quadratic_inverse_convexity_scan(args.n, args.trials, grid, args.seed,
                                                      args.tol or QUAD_INV_TOL, workers=args.workers)
        else:
            report = family_scan(args.family, args.alpha_grid, args.n, args.trials, args.seed,
                                 grid, args.tol or CONVEXITY_TOL, workers=args.workers)
    except DomainError as exc:
        raise InputError(str(exc)) from exc
    _emit(report.to_dict(verbose=args.verbose), args.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_repr_roundtrip(args):
    try:
        h = fop.parse_weight_spec(args.h)
        built = fop.from_weight(h, args.quad_nodes)
    except DomainError as exc:
        raise InputError(f"--h {args.h}: {exc}") from exc
    target = _function(args.target)
    t = fop.log_grid(1e-3, 1e3, args.points)
    a = built(t)
    b = target(t)
    dev = float(np.max(np.abs(a - b) / np.abs(b)))
    tol = args.tol or REPR_TOL
    _emit({"h": args.h, "target": args.target, "points": args.points,
           "max_rel_deviation": dev, "tolerance": tol, "pass": dev <= tol}, args.out)
    return EXIT_OK if dev <= tol else EXIT_VIOLATION


def cmd_check_f(args):
    func = _function(args.f)
    samples = fop.log_grid(1e-4, 1e4, 200)
    sym = fop.symmetry_check(func, samples)
    bounds = fop.bounds_check(func, samples)
    worst = None
    for i in range(args.trials):
        rng = trial_rng(args.seed, i)
        nodes = np.exp(rng.uniform(np.log(1e-2), np.log(1e2), rng.integers(2, 7)))
        rep = fop.loewner_check(func, nodes)
        if worst is None or rep.min_margin < worst.min_margin:
            worst = rep
    checks = {"symmetry": sym.to_dict(), "bounds": bounds.to_dict()}
    if worst is not None:
        checks["loewner"] = worst.to_dict()
    passed = sym.passed and bounds.passed and (worst is None or worst.passed)
    _emit({"f": args.f, "checks": checks, "pass": passed}, args.out)
    return EXIT_OK if passed else EXIT_VIOLATION


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _warn(message)
        raise SystemExit(EXIT_INPUT)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=_positive_float, default=None)

    p = _Parser(prog="qchi2", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", parents=[common], help="chi2_f(rho, sigma) for two matrix files")
    e.add_argument("rho")
    e.add_argument("sigma")
    e.add_argument("--f", default="min")
    e.add_argument("--path", choices=PATHS, default="eigenbasis")
    e.set_defaults(run=cmd_eval)

    s = sub.add_parser("scan", parents=[common], help="randomized property scans")
    s.add_argument("kind", choices=["convexity", "contraction", "quadratic-inverse", "family"])
    s.add_argument("--f", default="min")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--trials", type=_nonneg_int, default=100)
    s.add_argument("--lambda-grid", type=_float_list, default=None)
    s.add_argument("--env-dims", type=lambda x: [int(v) for v in _float_list(x)], default=[1, 2, 4])
    s.add_argument("--family", choices=["wyd", "ruskai", "weight"], default="wyd")
    s.add_argument("--alpha-grid", type=_float_list, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--verbose", action="store_true", help="include per-trial margins")
    s.set_defaults(run=cmd_scan)

    r = sub.add_parser("repr-roundtrip", parents=[common],
                       help="compare from_weight(h) with a closed-form target")
    r.add_argument("--h", required=True, help="const:<a>, linear, or a CSV path")
    r.add_argument("--target", required=True)
    r.add_argument("--quad-nodes", type=int, default=fop.DEFAULT_QUAD_NODES)
    r.add_argument("--points", type=int, default=200)
    r.set_defaults(run=cmd_repr_roundtrip)

    c = sub.add_parser("check-f", parents=[common], help="symmetry, bounds and Loewner checks")
    c.add_argument("--f", required=True)
    c.add_argument("--trials", type=_nonneg_int, default=50)
    c.set_defaults(run=cmd_check_f)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except InputError as exc:
        _warn(str(exc))
        return EXIT_INPUT
    except (SingularStateError, NumericError) as exc:
        _warn(str(exc))
        return EXIT_NUMERIC
    except DomainError as exc:
        _warn(str(exc))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
