"""Command-line front end with machine-readable reports and stable exit codes.

Exit codes: 0 analysis passed / certified; 1 analysis completed but the
equation is not linearizable or not certified; 2 usage or input error;
3 numerical failure (quadrature, degeneracy, singular sample).

Every report carries the tool version, the seed and the tolerance set
actually used; identical configuration and seed produce byte-identical
output.  Human diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import colehopf as ch
from .entropy import degree_sequence
from .errors import (DegenerateDerivative, DegenerateParams,
                     DegenerateTrajectory, DivisionByZeroFunction, DomainError,
                     NonRationalEquation, ParseError, PoleError, QuadlinError,
                     QuadratureFailure, RankDeficient, SignChange, TooShort,
                     UnboundParam, UnknownIdentifier, UnsupportedFormat,
                     ZeroDivisionCell)
from .lattice import make_staircase
from .linearize import DEFAULT_TOL, QuadEquation, check_conditions
from .report import (degrees_to_csv, dumps_json, grid_to_csv, grid_to_jsonable)
from .transform import (CERTIFY_TOL, QUAD_TOL, build_psi, fit_linear_model,
                        recover_alpha, roundtrip_verify)

EXIT_PASS = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

DEFAULT_TOLERANCES = {
    "conditions": DEFAULT_TOL,   # six-condition sampling check
    "certify": CERTIFY_TOL,      # fit residual for certification
    "quadrature": QUAD_TOL,      # psi construction
    "roundtrip": 1e-6,           # two-path discrepancy
    "residual": 1e-10,           # Burgers/Hietarinta verdicts
}

_NUMERICAL_ERRORS = (QuadratureFailure, DegenerateDerivative, SignChange,
                     RankDeficient, DomainError, ZeroDivisionCell, PoleError,
                     DegenerateTrajectory, DivisionByZeroFunction,
                     DegenerateParams)
_INPUT_ERRORS = (ParseError, UnknownIdentifier, UnboundParam,
                 NonRationalEquation, TooShort, UnsupportedFormat)

_EQ_FILE_KEYS = {"rhs", "params", "sample_box"}


class UsageError(Exception):
    pass


def load_equation(path: str) -> QuadEquation:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"file not found: {path}")
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read equation file {path}: {err}") from None
    if not isinstance(data, dict):
        raise UsageError("equation file must hold a JSON object")
    unknown = set(data) - _EQ_FILE_KEYS
    if unknown:
        raise UsageError(f"unknown keys in equation file: {sorted(unknown)}")
    if "rhs" not in data:
        raise UsageError("equation file lacks 'rhs'")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise UsageError("'params' must be an object")
    box = data.get("sample_box", (0.2, 1.7))
    if not (isinstance(box, (list, tuple)) and len(box) == 2):
        raise UsageError("'sample_box' must be [lo, hi]")
    try:
        return QuadEquation(data["rhs"], sample_box=box, params=params)
    except ValueError as err:
        raise UsageError(str(err)) from None


def parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise UsageError(f"--grid expects NxM, got {text!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--grid expects NxM, got {text!r}") from None
    if n < 1 or m < 1:
        raise UsageError("grid dimensions must be positive")
    return n, m


def resolve_tolerances(overrides) -> dict:
    tols = dict(DEFAULT_TOLERANCES)
    for item in overrides or []:
        if "=" not in item:
            raise UsageError(f"--tol expects NAME=VALUE, got {item!r}")
        name, _, value = item.partition("=")
        if name not in tols:
            raise UsageError(f"unknown tolerance {name!r}; "
                             f"known: {sorted(tols)}")
        try:
            v = float(value)
        except ValueError:
            raise UsageError(f"bad tolerance value {value!r}") from None
        if not v > 0:
            raise UsageError("tolerances must be strictly positive")
        tols[name] = v
    return tols


def resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QUADLIN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"QUADLIN_SEED must be an integer, got {env!r}") from None
    return 0


def _header(command: str, seed: int, tols: dict) -> dict:
    return {
        "version": __version__,
        "command": command,
        "seed": seed,
        "tolerances": {k: tols[k] for k in sorted(tols)},
    }


def _write(args, payload: bytes):
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)


# ---------------------------------------------------------------------------
# command bodies
# ---------------------------------------------------------------------------

def cmd_check(args, seed, tols) -> int:
    eq = load_equation(args.eq)
    if args.format != "json":
        raise UnsupportedFormat("check reports are json only")
    report = check_conditions(eq, seed=seed, tol=tols["conditions"])
    out = _header("check", seed, tols)
    out.update(report.to_dict())
    _write(args, dumps_json(out))
    return EXIT_PASS if report.passed else EXIT_NEGATIVE


def _build_transform(eq, seed, tols):
    report = check_conditions(eq, seed=seed, tol=tols["conditions"])
    if not report.passed:
        return report, None, None
    table = recover_alpha(eq, report)
    psi = build_psi(table, tol=tols["quadrature"])
    model = fit_linear_model(eq, psi, seed=seed, tol=tols["certify"])
    return report, psi, model


def cmd_transform(args, seed, tols) -> int:
    eq = load_equation(args.eq)
    if args.format != "json":
        raise UnsupportedFormat("transform reports are json only")
    report, psi, model = _build_transform(eq, seed, tols)
    out = _header("transform", seed, tols)
    out["report"] = report.to_dict()
    if psi is None:
        _write(args, dumps_json(out))
        return EXIT_NEGATIVE
    out["x_ref"] = psi.x_ref
    out["knots"] = [[x, a] for x, a in psi.knot_pairs()]
    out["model"] = model.to_dict()
    _write(args, dumps_json(out))
    return EXIT_PASS if model.certified else EXIT_NEGATIVE


def cmd_roundtrip(args, seed, tols) -> int:
    eq = load_equation(args.eq)
    n, m = parse_grid(args.grid)
    report, psi, model = _build_transform(eq, seed, tols)
    out = _header("roundtrip", seed, tols)
    out["report"] = report.to_dict()
    if psi is None:
        if args.format != "json":
            raise UnsupportedFormat("no grid to export for a failed check")
        _write(args, dumps_json(out))
        return EXIT_NEGATIVE
    out["model"] = model.to_dict()
    if not model.certified:
        if args.format != "json":
            raise UnsupportedFormat("no grid to export for an uncertified model")
        _write(args, dumps_json(out))
        return EXIT_NEGATIVE
    discrepancy = roundtrip_verify(eq, psi, model, n, m, seed=seed)
    from .lattice import evolve_quad
    grid = evolve_quad(eq, make_staircase(n, m, seed=seed, interval=eq.sample_box))
    if args.format == "csv":
        _write(args, grid_to_csv(grid))
        return EXIT_PASS if discrepancy <= tols["roundtrip"] else EXIT_NEGATIVE
    out["discrepancy"] = discrepancy
    out["passed"] = discrepancy <= tols["roundtrip"]
    out["grid"] = grid_to_jsonable(grid)
    _write(args, dumps_json(out))
    return EXIT_PASS if out["passed"] else EXIT_NEGATIVE


def cmd_entropy(args, seed, tols) -> int:
    eq = load_equation(args.eq)
    seq = degree_sequence(eq, K=args.depth, seed=seed, check_stability=True)
    if args.format == "csv":
        _write(args, degrees_to_csv(seq.degrees))
    else:
        out = _header("entropy", seed, tols)
        out.update(seq.to_dict())
        out["depth"] = args.depth
        _write(args, dumps_json(out))
    return EXIT_PASS if seq.classification in ("constant", "linear") else EXIT_NEGATIVE


def _parse_hparams(text: str) -> ch.HietarintaParams:
    try:
        e1, e2, o1, o2 = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--hparams expects e1,e2,o1,o2 got {text!r}") from None
    return ch.HietarintaParams(e1, e2, o1, o2)


def cmd_colehopf(args, seed, tols) -> int:
    n, m = parse_grid(args.grid)
    tol = tols["residual"]
    out = _header("colehopf", seed, tols)
    out["family"] = args.family
    extras = {}
    if args.family == "g8":
        psi0 = make_staircase(n, m + 1, seed=seed, interval=(0.5, 2.0),
                              log_uniform=True)
        psi = ch.evolve_linear_burgers(args.p, psi0)
        u = ch.cole_hopf_map(psi)
        family = ch.BurgersFamily.classical(args.p)
        residual = ch.verify_burgers(u, family)
        extras["p"] = args.p
    elif args.family == "g23":
        family = ch.BurgersFamily(args.kappa0, args.kappa1, args.kappa2)
        init = make_staircase(n, m, seed=seed, interval=(0.5, 2.0))
        u = ch.solve_g23(family, init)
        residual = ch.verify_burgers(u, family)
        extras["kappas"] = list(family.kappas())
        extras["potential_mismatch"] = ch.verify_potential_compatibility(u, family)
    elif args.family == "canonical":
        rng = np.random.default_rng(seed)
        col = rng.uniform(0.5, 2.0, n + m + 1)
        u = ch.solve_canonical(col, n, m)
        residual = ch.verify_canonical_form(u)
    elif args.family == "rosa":
        params = _parse_hparams(args.hparams)
        init = make_staircase(n, m, seed=seed, interval=(0.3, 1.5))
        ut = ch.solve_rosa(params, init)
        rosa_res = ch.rosa_residual(ut, params)
        u, family = ch.hietarinta_transform(params, ut, kappa0=args.kappa0)
        g23_res = ch.verify_burgers(u, family)
        residual = max(rosa_res, g23_res)
        extras["rosa_residual"] = rosa_res
        extras["g23_residual"] = g23_res
        extras["kappa2_kappa0"] = family.kappa2 * family.kappa0
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown family {args.family}")
    if args.format == "csv":
        _write(args, grid_to_csv(u))
        return EXIT_PASS if residual <= tol else EXIT_NEGATIVE
    out["max_residual"] = residual
    out["passed"] = residual <= tol
    out.update(extras)
    out["grid"] = grid_to_jsonable(u)
    _write(args, dumps_json(out))
    return EXIT_PASS if out["passed"] else EXIT_NEGATIVE


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadlin",
        description="Linearizability analysis for quad-graph lattice equations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, eq=True, grid=None, depth=False):
        if eq:
            p.add_argument("--eq", required=True, help="equation JSON file")
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (falls back to QUADLIN_SEED, then 0)")
        p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help="override a named tolerance (repeatable)")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if grid is not None:
            p.add_argument("--grid", default=grid, help="grid size NxM")
        if depth:
            p.add_argument("--depth", type=int, default=8,
                           help="diagonal depth K for the degree sequence")

    common(sub.add_parser("check", help="run the six-condition check"))
    common(sub.add_parser("transform", help="build and certify the transform"))
    common(sub.add_parser("roundtrip", help="certify and round-trip on a grid"),
           grid="20x20")
    common(sub.add_parser("entropy", help="exact degree-growth pre-screen"),
           depth=True)

    p_ch = sub.add_parser("colehopf", help="verify a Burgers-family member")
    common(p_ch, eq=False, grid="20x20")
    p_ch.add_argument("--family", choices=("g8", "g23", "canonical", "rosa"),
                      default="g8")
    p_ch.add_argument("--p", type=float, default=1.0,
                      help="classical Burgers parameter (family g8)")
    p_ch.add_argument("--kappa0", type=float, default=1.0)
    p_ch.add_argument("--kappa1", type=float, default=1.0)
    p_ch.add_argument("--kappa2", type=float, default=0.5)
    p_ch.add_argument("--hparams", default="2,0,3,1",
                      help="e1,e2,o1,o2 for the Hietarinta equation")
    return parser


_COMMANDS = {
    "check": cmd_check,
    "transform": cmd_transform,
    "roundtrip": cmd_roundtrip,
    "entropy": cmd_entropy,
    "colehopf": cmd_colehopf,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        # argparse exits 2 on usage errors and 0 on --help
        return int(err.code or 0)
    try:
        seed = resolve_seed(args)
        tols = resolve_tolerances(args.tol)
        return _COMMANDS[args.command](args, seed, tols)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except _INPUT_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERICAL_ERRORS as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except QuadlinError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
