"""Command line front end.

Every command that writes a CSV also writes ``<stem>.manifest.json`` next to
it, recording the command, the problem hash, the integrator settings, the
output files and per-column comparison tolerances.  CSVs have a single header
line and numbers printed with 17 significant digits.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .closedform import ValidityViolation, make_family, residual
from .curves import CURVE_CONFIG, bratu2d_count, bratu_pn_count, count_solutions_at, default_a_grid, trace_curve
from .integrate import IntegrationError, IvpConfig, first_root, integrate_coulomb, integrate_ivp
from .model import RadialProblem, problem_hash
from .pohozaev import pohozaev_scan
from .transform import first_root_via_cov, make_cov, trace_curve_via_cov

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


class _Failure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


# -- output helpers ----------------------------------------------------------

def write_csv(path: Path, columns: dict) -> None:
    names = list(columns)
    data = np.column_stack([np.asarray(columns[k], dtype=float) for k in names])
    np.savetxt(path, data, delimiter=",", header=",".join(names), comments="", fmt="%.17g")


def read_csv(path) -> dict:
    """Inverse of the CSV writer: column name -> array."""
    arr = np.genfromtxt(path, delimiter=",", names=True)
    return {name: np.atleast_1d(arr[name]) for name in arr.dtype.names}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if np.isfinite(x) else str(x)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def _config_dict(cfg: IvpConfig) -> dict:
    return {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol, "r_max": cfg.r_max,
            "h0_policy": cfg.h0_policy, "max_steps": cfg.max_steps}


def _emit(args, stem, columns, tolerances, summary=None, problem=None, cfg=None):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{stem}.csv"
    write_csv(csv_path, columns)
    outputs = [str(csv_path)]
    if summary is not None:
        json_path = out / f"{stem}.json"
        write_json(json_path, summary)
        outputs.append(str(json_path))
    manifest = {
        "command": args.command,
        "argv": args.argv,
        "problem_hash": problem_hash(problem) if problem is not None else None,
        "config": _config_dict(cfg if cfg is not None else _config(args)),
        "outputs": outputs,
        "column_rtol": tolerances,
        "version": __version__,
    }
    write_json(out / f"{stem}.manifest.json", manifest)
    for o in outputs:
        print(o)


def _print_json(args, stem, payload):
    text = json.dumps(_jsonable(payload), sort_keys=True)
    print(text)
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / f"{stem}.json", payload)


# -- input helpers -----------------------------------------------------------

def _load_problem(path) -> RadialProblem:
    if path is None:
        raise _Failure(EXIT_INVALID, "--problem is required")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _Failure(EXIT_INVALID, f"cannot read problem spec: {exc}") from exc
    try:
        return RadialProblem.from_json(text)
    except json.JSONDecodeError as exc:
        raise _Failure(EXIT_INVALID, f"{path}: not valid JSON ({exc})") from exc


def _config(args, base: IvpConfig = IvpConfig()) -> IvpConfig:
    kw = {}
    if getattr(args, "rel_tol", None) is not None:
        kw["rel_tol"] = args.rel_tol
    if getattr(args, "abs_tol", None) is not None:
        kw["abs_tol"] = args.abs_tol
    if getattr(args, "rmax", None) is not None:
        kw["r_max"] = args.rmax
    return IvpConfig(**{**_config_dict(base), **kw})


def _parse_params(items) -> dict:
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise _Failure(EXIT_INVALID, f"--param expects key=value, got {item!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise _Failure(EXIT_INVALID, f"--param {key}: {value!r} is not a number") from None
    return params


def _r_grid(args, lo_default):
    lo = lo_default if args.r_min is None else args.r_min
    if not (args.r_max > lo >= 0 and args.r_points >= 2):
        raise _Failure(EXIT_INVALID, "need 0 <= --r-min < --r-max and --r-points >= 2")
    return np.linspace(lo, args.r_max, args.r_points)


# -- commands ----------------------------------------------------------------

def cmd_eval_family(args):
    """Columns: r, u, uprime, residual."""
    fam = make_family(args.family, _parse_params(args.param), variant=args.variant)
    r = _r_grid(args, 1e-6)
    r = r[r > fam.r_min]
    if r.size == 0:
        raise _Failure(EXIT_INVALID, f"{fam.family_id} is only defined for r > {fam.r_min}")
    cols = {"r": r, "u": fam.u(r), "uprime": fam.uprime(r), "residual": residual(fam, r)}
    summary = {"family": fam.family_id, "params": fam.params, "problem": fam.problem.to_dict(),
               "u0": fam.u0 if fam.r_min == 0 else None, "residual_max": float(np.max(np.abs(cols["residual"])))}
    _emit(args, f"family_{fam.family_id}", cols, {"r": 0.0, "u": 1e-12, "uprime": 1e-12, "residual": None},
          summary, fam.problem)


def _shot(problem, a, cfg, args):
    if problem.coulomb:
        prof = integrate_coulomb(problem, a, cfg, stop_at_root=True)
        ev = prof.event("first_root")
        status = "root" if ev is not None else "no_root"
        rho = ev.r if ev is not None else float("inf")
        return status, rho, prof
    shoot = first_root_via_cov if args.command == "solve-via-cov" else first_root
    out = shoot(problem, a, cfg, require_positive_f=not args.sign_changing)
    return out.status, out.rho, out.profile


def cmd_shoot(args):
    """Columns: r, u, uprime (up to the first root or r_max)."""
    problem = _load_problem(args.problem)
    cfg = _config(args)
    if args.command == "solve-via-cov" and problem.coulomb:
        raise _Failure(EXIT_INVALID, "the change of variables needs alpha > -1")
    status, rho, prof = _shot(problem, args.a, cfg, args)
    lam = rho ** (problem.p + problem.alpha) if np.isfinite(rho) else float("inf")
    summary = {"a": args.a, "status": status, "rho": rho, "lambda": lam,
               "events": [{"kind": e.kind, "r": e.r} for e in prof.events]}
    stem = "shoot" if args.command == "shoot" else "solve_via_cov"
    _emit(args, stem, {"r": prof.r, "u": prof.u, "uprime": prof.uprime},
          {"r": 1e-6, "u": 1e-6, "uprime": 1e-6}, summary, problem)


def cmd_trace_curve(args):
    """Columns: a, rho, lambda, reshoot_residual."""
    problem = _load_problem(args.problem)
    cfg = _config(args, CURVE_CONFIG)
    if not (0 < args.a_min < args.a_max and args.points >= 2):
        raise _Failure(EXIT_INVALID, "need 0 < --a-min < --a-max and --points >= 2")
    grid = default_a_grid(args.a_min, args.a_max, args.points)
    tracer = trace_curve_via_cov if args.via_cov else trace_curve
    curve = tracer(problem, grid, cfg, strict=not args.sign_changing, threads=args.threads)
    counts = {}
    queries = list(args.lam or [])
    for mult in args.fold_multiple or []:
        if curve.folds:
            queries.append(mult * curve.folds[0].lam)
    for q in queries:
        counts[repr(float(q))] = count_solutions_at(curve, q) if curve.points else 0
    summary = {
        "points": len(curve.points),
        "folds": [{"a": f.a, "lambda": f.lam, "kind": f.kind} for f in curve.folds],
        "asymptote": curve.asymptote,
        "a_truncated": curve.a_truncated,
        "counts": counts,
        "max_reshoot_residual": max((p.reshoot_residual for p in curve.points), default=None),
        "failures": [{"a": a, "error": msg} for a, msg in curve.failures],
    }
    _emit(args, "curve", {"a": curve.a, "rho": curve.rho, "lambda": curve.lam,
                          "reshoot_residual": [p.reshoot_residual for p in curve.points]},
          {"a": 1e-9, "rho": 1e-6, "lambda": 1e-6, "reshoot_residual": None}, summary, problem, cfg)


def cmd_pohozaev_scan(args):
    """Columns: r, P, Pprime_formula, Pprime_numeric."""
    if args.family:
        fam = make_family(args.family, _parse_params(args.param), variant=args.variant)
        problem, source = fam.problem, fam
    else:
        problem = _load_problem(args.problem)
        if args.a is None:
            raise _Failure(EXIT_INVALID, "pohozaev-scan needs --a (shot profile) or --family")
        source = integrate_ivp(problem, args.a, _config(args), r_end=args.r_max * 1.01)
    r = _r_grid(args, args.r_max / args.r_points)
    if np.any(r <= 0):
        raise _Failure(EXIT_INVALID, "--r-min must be positive for a scan")
    samples = pohozaev_scan(problem, source, r)
    cols = {"r": r, "P": [s.P for s in samples], "Pprime_formula": [s.Pprime_formula for s in samples],
            "Pprime_numeric": [s.Pprime_numeric for s in samples]}
    _emit(args, "pohozaev", cols, {"r": 0.0, "P": 1e-6, "Pprime_formula": 1e-6, "Pprime_numeric": 1e-4},
          None, problem)


def cmd_bratu_count(args):
    if args.variant == "2d":
        res = bratu2d_count(args.B)
    else:
        if args.n is None:
            raise _Failure(EXIT_INVALID, "--variant pn needs --n")
        res = bratu_pn_count(args.n, args.B)
    _print_json(args, "bratu_count", {"count": res.count, "a": list(res.a_roots), "B_critical": res.B_critical})


def cmd_transform(args):
    _print_json(args, "transform", make_cov(args.n, args.p, args.alpha).to_dict())


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="radial-plap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=".", help="output directory (default: current)")
    common.add_argument("--rel-tol", type=float)
    common.add_argument("--abs-tol", type=float)
    common.add_argument("--rmax", type=float, help="largest radius for shooting")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    radii = argparse.ArgumentParser(add_help=False)
    radii.add_argument("--r-min", type=float)
    radii.add_argument("--r-max", type=float, default=10.0)
    radii.add_argument("--r-points", type=int, default=201)

    family = argparse.ArgumentParser(add_help=False)
    family.add_argument("--param", action="append", metavar="KEY=VALUE")
    family.add_argument("--variant", choices=["corrected", "printed"], default="corrected")

    p = sub.add_parser("eval-family", parents=[common, radii, family], help="tabulate a closed-form family")
    p.add_argument("--family", required=True)
    p.set_defaults(func=cmd_eval_family)

    for name, helptext in [("shoot", "integrate from u(0) = a to the first root"),
                           ("solve-via-cov", "same as shoot, through the weight-removing change of variables")]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--problem", required=True)
        p.add_argument("--a", type=float, required=True)
        p.add_argument("--sign-changing", action="store_true", help="allow f to change sign on (0, a]")
        p.set_defaults(func=cmd_shoot)

    p = sub.add_parser("trace-curve", parents=[common], help="solution curve (lambda, u(0)) on the unit ball")
    p.add_argument("--problem", required=True)
    p.add_argument("--a-min", type=float, default=0.05)
    p.add_argument("--a-max", type=float, default=3.0)
    p.add_argument("--points", type=int, default=60)
    p.add_argument("--lam", type=float, action="append", help="count solutions at this lambda")
    p.add_argument("--fold-multiple", type=float, action="append",
                   help="count solutions at this multiple of the first fold's lambda")
    p.add_argument("--sign-changing", action="store_true")
    p.add_argument("--via-cov", action="store_true", help="shoot in the transformed variable")
    p.set_defaults(func=cmd_trace_curve)

    p = sub.add_parser("pohozaev-scan", parents=[common, radii, family], help="Pohozaev function along a profile")
    p.add_argument("--problem")
    p.add_argument("--a", type=float)
    p.add_argument("--family")
    p.set_defaults(func=cmd_pohozaev_scan)

    p = sub.add_parser("bratu-count", help="exact solution count of the Bratu problems")
    p.add_argument("--variant", choices=["2d", "pn"], default="2d")
    p.add_argument("--n", type=float)
    p.add_argument("--B", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bratu_count)

    p = sub.add_parser("transform", help="print the change of variables for (n, p, alpha)")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_transform)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    args.argv = argv
    try:
        args.func(args)
    except _Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (IntegrationError, OverflowError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValidityViolation, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
