"""Command-line interface: ``sharpcross <command> [options]``.

Every command prints a JSON document (default) or CSV.  JSON documents carry
a ``manifest`` with the command, its full parameter set, the tool version,
the seed for stochastic commands and the wall time.  CSV output ends with a
single ``# manifest {...}`` comment line.

Exit codes: 0 success, 1 usage error, 2 quadrature tolerance not met,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import time
from typing import List, Optional, Sequence

from . import __version__
from .asymptotics import (CONSTANT_TOLERANCE, PUBLISHED_CONSTANTS, constant_table,
                          consistency_checks, theorem_i, theorem_ii)
from .errors import SharpCrossError
from .kac_rice import SPLIT_INTERVALS, density_at, expected_count
from .model import CoefficientModel, as_model
from .monte_carlo import McConfig, convergence_study, estimate
from .quadrature import QuadratureConfig

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # let "-inf" and "-1e3" through as values rather than option flags
    _NEG = re.compile(r"^-(inf(inity)?|\d+\.?\d*([eE][-+]?\d+)?|\.\d+([eE][-+]?\d+)?)$", re.I)

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = self._NEG

    def error(self, message):
        self.print_usage(sys.stderr)
        _diag(f"{self.prog}: error: {message}")
        raise SystemExit(EXIT_USAGE)


def _diag(msg: str) -> None:
    use_color = sys.stderr.isatty() and "NO_COLOR" not in os.environ
    if use_color and "error" in msg:
        msg = f"\033[31m{msg}\033[0m"
    print(msg, file=sys.stderr)


# --- argument types -----------------------------------------------------------

def _real(text: str) -> float:
    """Float parser accepting ``inf`` / ``-inf`` literals."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if math.isnan(v):
        raise argparse.ArgumentTypeError("nan is not allowed")
    return v


def _finite(text: str) -> float:
    v = _real(text)
    if math.isinf(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _nonneg(text: str) -> float:
    v = _finite(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _positive(text: str) -> float:
    v = _finite(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return v


def _count(minimum: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}: {text!r}")
        return v
    return parse


# --- output helpers -----------------------------------------------------------

def _clean(obj):
    """Make a payload JSON-safe: infinities become strings, nan becomes null."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if v is None:
        return ""
    return str(v)


def _manifest(command: str, params: dict, started: float, seed=None) -> dict:
    m = {"command": command, "params": params, "version": __version__,
         "wall_time_s": time.perf_counter() - started}
    if seed is not None:
        m["seed"] = seed
    return m


def _emit(args, payload: dict, header: Sequence[str], rows: List[Sequence]) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(_clean(payload), indent=2, allow_nan=False) + "\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    buf.write("# manifest " + json.dumps(_clean(payload["manifest"]), sort_keys=True) + "\n")
    sys.stdout.write(buf.getvalue())


def _model_from(args) -> CoefficientModel:
    if args.sigma_file is not None:
        try:
            with open(args.sigma_file) as fh:
                vals = [float(line) for line in fh if line.strip()]
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read sigma file: {exc}")
        if len(vals) != args.n + 1:
            raise UsageError(f"sigma file has {len(vals)} values, need n+1 = {args.n + 1}")
        return as_model(args.n, vals, args.sigma0)
    return as_model(args.n, args.sigma, args.sigma0)


def _model_params(args) -> dict:
    return {"n": args.n, "sigma": args.sigma, "sigma0": args.sigma0,
            "sigma_file": args.sigma_file}


def _quad_from(args) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol,
                            max_subdivisions=args.max_subdivisions)


def _quad_params(args) -> dict:
    return {"rel_tol": args.rel_tol, "abs_tol": args.abs_tol,
            "max_subdivisions": args.max_subdivisions}


# --- commands -----------------------------------------------------------------

def cmd_expected(args) -> int:
    t0 = time.perf_counter()
    a, b = args.interval
    if not a < b:
        raise UsageError(f"interval must satisfy a < b, got {a} {b}")
    model = _model_from(args)
    cfg = _quad_from(args)
    parts = {}
    for name, (lo, hi) in SPLIT_INTERVALS.items():
        lo, hi = max(lo, a), min(hi, b)
        if lo < hi:
            parts[name] = expected_count(model, (lo, hi), args.u, cfg)
    value = sum(p.value for p in parts.values())
    err = sum(p.est_error for p in parts.values())
    converged = all(p.converged for p in parts.values())
    params = {**_model_params(args), "u": args.u, "interval": [a, b], **_quad_params(args)}
    payload = {
        "value": value, "est_error": err, "converged": converged, "u": args.u,
        "interval": [a, b],
        "per_interval": {k: {"interval": list(SPLIT_INTERVALS[k]), "value": p.value,
                             "est_error": p.est_error} for k, p in parts.items()},
        "manifest": _manifest("expected", params, t0),
    }
    rows = [[k, max(SPLIT_INTERVALS[k][0], a), min(SPLIT_INTERVALS[k][1], b), p.value, p.est_error]
            for k, p in parts.items()]
    rows.append(["total", a, b, value, err])
    _emit(args, payload, ["interval", "a", "b", "value", "est_error"], rows)
    if not converged:
        _diag("error: quadrature tolerance not met; value is the best available estimate")
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_asymptotic(args) -> int:
    t0 = time.perf_counter()
    if args.n < 1:
        raise UsageError("n must be >= 1")
    table = constant_table() if args.constants == "computed" else None
    if args.regime == "i":
        res = theorem_i(args.n, args.u, table)
    else:
        res = theorem_ii(args.n, table)
    params = {"n": args.n, "u": args.u, "regime": args.regime, "constants": args.constants}
    payload = {**res.to_dict(), "manifest": _manifest("asymptotic", params, t0)}
    rows = [[k, v] for k, v in res.terms.items()] + [["value", res.value]]
    _emit(args, payload, ["term", "value"], rows)
    return EXIT_OK


def cmd_simulate(args) -> int:
    t0 = time.perf_counter()
    model = _model_from(args)
    cfg = McConfig(trials=args.trials, seed=args.seed,
                   grid_points_per_unit=args.grid_density, refine_tol=args.refine_tol)
    est = estimate(model, args.u, cfg)
    params = {**_model_params(args), "u": args.u, "trials": args.trials, "seed": args.seed,
              "grid_density": args.grid_density, "refine_tol": args.refine_tol}
    payload = {**est.to_dict(), "u": args.u,
               "manifest": _manifest("simulate", params, t0, seed=args.seed)}
    rows = [[k, v] for k, v in est.per_interval.items()]
    rows += [["mean", est.mean], ["std_error", est.std_error]]
    _emit(args, payload, ["quantity", "value"], rows)
    return EXIT_OK


def _tolerance(name, args):
    abs_tol, rel_tol = CONSTANT_TOLERANCE[name]
    if args.abs_tol is not None or args.rel_tol is not None:
        abs_tol = args.abs_tol or 0.0
        rel_tol = args.rel_tol or 0.0
    return max(abs_tol, rel_tol * abs(PUBLISHED_CONSTANTS[name]))


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    names = list(PUBLISHED_CONSTANTS) if (args.all or not args.constant) else args.constant
    unknown = [n for n in names if n not in PUBLISHED_CONSTANTS]
    if unknown:
        raise UsageError(f"unknown constant(s): {', '.join(unknown)}; "
                         f"choose from {', '.join(PUBLISHED_CONSTANTS)}")
    with_checks = args.all or (not args.constant and not args.no_checks)
    table = constant_table(names=list(PUBLISHED_CONSTANTS) if with_checks else names)
    rows = []
    for name in names:
        computed, ref = table[name], PUBLISHED_CONSTANTS[name]
        tol = _tolerance(name, args)
        diff = abs(computed - ref)
        rows.append({"name": name, "kind": "constant", "computed": computed, "paper_value": ref,
                     "abs_diff": diff, "tolerance": tol, "pass": bool(diff <= tol),
                     "est_error": table.errors[name]})
    if with_checks:
        for c in consistency_checks(table):
            rows.append({"name": c.name, "kind": "consistency", "computed": c.computed,
                         "paper_value": c.expected, "abs_diff": c.abs_diff,
                         "tolerance": c.tolerance, "pass": bool(c.passed)})
    all_pass = all(r["pass"] for r in rows)
    params = {"constants": names, "checks": with_checks, "abs_tol": args.abs_tol,
              "rel_tol": args.rel_tol}
    payload = {"rows": rows, "all_pass": all_pass, "manifest": _manifest("verify", params, t0)}
    header = ["name", "computed", "paper_value", "abs_diff", "tolerance", "pass"]
    _emit(args, payload, header, [[r[h] for h in header] for r in rows])
    if not all_pass:
        failed = ", ".join(r["name"] for r in rows if not r["pass"])
        _diag(f"verification failed: {failed}")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_density(args) -> int:
    t0 = time.perf_counter()
    lo, hi = args.range
    if not lo <= hi:
        raise UsageError("range must satisfy lo <= hi")
    model = _model_from(args)
    k = args.points
    xs = [lo] if k == 1 else [lo + (hi - lo) * i / (k - 1) for i in range(k)]
    fs = [density_at(model, x, args.u) for x in xs]
    params = {**_model_params(args), "u": args.u, "range": [lo, hi], "points": k}
    payload = {"x": xs, "f_n": fs, "manifest": _manifest("density", params, t0)}
    _emit(args, payload, ["x", "f_n"], list(zip(xs, fs)))
    return EXIT_OK


def cmd_convergence(args) -> int:
    t0 = time.perf_counter()
    ns = args.ns
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise UsageError("n values must be strictly ascending")
    coef, power = args.u, args.u_power
    mc = None
    if args.mc_trials:
        mc = McConfig(trials=args.mc_trials, seed=args.seed)
    table = constant_table() if args.constants == "computed" else None
    rows = convergence_study(ns, lambda n: coef * n**power, _quad_from(args), mc, table)
    params = {"ns": ns, "u": coef, "u_power": power, "mc_trials": args.mc_trials,
              "seed": args.seed, "constants": args.constants, **_quad_params(args)}
    payload = {"rows": rows,
               "manifest": _manifest("convergence", params, t0,
                                     seed=args.seed if args.mc_trials else None)}
    header = ["n", "u", "exact", "asymptotic_i", "asymptotic_ii", "diff_i", "diff_ii",
              "mc", "mc_std_error"]
    _emit(args, payload, header, [[r[h] for h in header] for r in rows])
    return EXIT_OK


def load_schema(command: str) -> dict:
    """JSON schema for a command's JSON output."""
    from importlib import resources
    text = resources.files("sharpcross").joinpath("schemas", f"{command}.schema.json").read_text()
    return json.loads(text)


# --- parser -------------------------------------------------------------------

def _add_model(p):
    p.add_argument("--n", type=_count(0), required=True, help="polynomial degree")
    p.add_argument("--sigma", type=_nonneg, default=1.0,
                   help="common increment standard deviation (default 1)")
    p.add_argument("--sigma0", type=_nonneg, default=None,
                   help="override the first increment's standard deviation")
    p.add_argument("--sigma-file", default=None,
                   help="file with n+1 standard deviations, one per line")


def _add_quad(p):
    p.add_argument("--rel-tol", type=_positive, default=1e-10)
    p.add_argument("--abs-tol", type=_positive, default=1e-12)
    p.add_argument("--max-subdivisions", type=_count(1), default=2000)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sharpcross",
                 description="Expected number of u-sharp zero crossings of random "
                             "polynomials with Brownian-increment coefficients.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_, default_format="json"):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--format", choices=("json", "csv"), default=default_format)
        return p

    p = add("expected", "exact expected count by Kac-Rice quadrature")
    _add_model(p)
    p.add_argument("--u", type=_nonneg, default=0.0, help="slope threshold (default 0)")
    p.add_argument("--interval", nargs=2, type=_real, default=[-math.inf, math.inf],
                   metavar=("A", "B"), help="endpoints; use inf / -inf (default whole line)")
    _add_quad(p)
    p.set_defaults(func=cmd_expected)

    p = add("asymptotic", "large-n approximation with named terms")
    p.add_argument("--n", type=_count(1), required=True)
    p.add_argument("--u", type=_nonneg, default=0.0)
    p.add_argument("--regime", choices=("i", "ii"), default="i")
    p.add_argument("--constants", choices=("published", "computed"), default="published",
                   help="published constants or a freshly computed table")
    p.set_defaults(func=cmd_asymptotic)

    p = add("simulate", "Monte Carlo estimate")
    _add_model(p)
    p.add_argument("--u", type=_nonneg, default=0.0)
    p.add_argument("--trials", type=_count(1), default=10_000)
    p.add_argument("--seed", type=_count(0), default=0, help="master seed (default 0)")
    p.add_argument("--grid-density", type=_count(16), default=200)
    p.add_argument("--refine-tol", type=_positive, default=1e-12)
    p.set_defaults(func=cmd_simulate)

    p = add("verify", "recompute the tabulated constants and compare")
    p.add_argument("--all", action="store_true", help="all constants plus consistency checks")
    p.add_argument("--constant", action="append", default=[], metavar="NAME",
                   help="constant to verify (repeatable)")
    p.add_argument("--no-checks", action="store_true", help="skip consistency checks")
    p.add_argument("--abs-tol", type=_nonneg, default=None,
                   help="override absolute tolerance for constants")
    p.add_argument("--rel-tol", type=_nonneg, default=None,
                   help="override relative tolerance for constants")
    p.set_defaults(func=cmd_verify)

    p = add("density", "sharp-crossing intensity on a uniform grid", default_format="csv")
    _add_model(p)
    p.add_argument("--u", type=_nonneg, default=0.0)
    p.add_argument("--range", nargs=2, type=_finite, default=[-3.0, 3.0], metavar=("LO", "HI"))
    p.add_argument("--points", type=_count(1), default=101)
    p.set_defaults(func=cmd_density)

    p = add("convergence", "exact count against both large-n approximations")
    p.add_argument("--ns", nargs="+", type=_count(1), default=[50, 200, 800])
    p.add_argument("--u", type=_nonneg, default=0.0, help="u = U * n**U_POWER")
    p.add_argument("--u-power", type=_finite, default=0.0)
    p.add_argument("--mc-trials", type=_count(0), default=0)
    p.add_argument("--seed", type=_count(0), default=0)
    p.add_argument("--constants", choices=("published", "computed"), default="published")
    _add_quad(p)
    p.set_defaults(func=cmd_convergence)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        _diag(f"sharpcross {args.command}: error: {exc}")
        return EXIT_USAGE
    except (SharpCrossError, ValueError) as exc:
        _diag(f"sharpcross {args.command}: error: {exc}")
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
