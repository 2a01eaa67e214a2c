"""Command-line front end.

Subcommands: validate, bounds, build, compare, envelope, splice. Problem
specs are JSON; grids and univariate functions are CSV; reports are JSON.

Spec file format::

    {
      "track": "identity" | {"x": [...], "y": [...]},
      "diagonal": "m-diag" | "w-diag" | "indep" | "fig1" | "fig2"
                  | {"x": [...], "y": [...]},
      "psi": "lower" | "upper" | "blend:0.5" | {"x": [...], "y": [...]},
      "mesh": 201
    }
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .canonical import PsiCandidate, blend, psi_bounds, quadruplet
from .construction import GridCopula, make_cpsi, materialize_grid
from .errors import TrackcopError
from .funcspace import USER_TOL, PLFunction, make_pl, merge_knots
from .splice import make_splice, splice_grid
from .trackmodel import (
    DiagonalSpec,
    Track,
    diagonal_conditions,
    existence_check,
    identity_track,
    make_diagonal,
    make_track,
)
from .verification import check_grid, compare, dominating_envelope

BUILTIN_DIAGONALS = {
    "m-diag": lambda x: x,
    "indep": lambda x: x * x,
    "fig1": lambda x: x - np.sin(2.0 * np.pi * x) ** 2 / (2.0 * np.pi),
    "fig2": lambda x: x - np.sin(np.pi * x) / np.pi,
}


@dataclass
class ProblemSpec:
    track: Track
    spec: DiagonalSpec
    psi_request: object  # "lower" | "upper" | ("blend", t) | PLFunction
    mesh_n: int


class SpecFileError(TrackcopError):
    """The problem spec file is unreadable or malformed."""


def _knot_function(obj) -> PLFunction:
    try:
        return make_pl(obj["x"], obj["y"])
    except (TypeError, KeyError, TrackcopError) as exc:
        raise SpecFileError(f"expected a valid knot object {{'x': [...], 'y': [...]}}: {exc}")


def builtin_diagonal(name: str, n: int) -> PLFunction:
    """Built-in diagonals, sampled as PL functions at the mesh density."""
    if name == "w-diag":
        return make_pl([0.0, 0.5, 1.0], [0.0, 0.0, 1.0])
    if name not in BUILTIN_DIAGONALS:
        raise SpecFileError(f"unknown builtin diagonal {name!r}")
    xs = np.linspace(0.0, 1.0, n)
    return PLFunction(xs, BUILTIN_DIAGONALS[name](xs))


def parse_psi_request(value):
    if isinstance(value, dict):
        return _knot_function(value)
    if value in ("lower", "upper"):
        return value
    if isinstance(value, str) and value.startswith("blend:"):
        try:
            t = float(value.split(":", 1)[1])
        except ValueError:
            raise SpecFileError(f"bad blend weight in {value!r}")
        if not 0.0 <= t <= 1.0:
            raise SpecFileError(f"blend weight {t} outside [0, 1]")
        return ("blend", t)
    raise SpecFileError(f"bad psi request {value!r}")


def load_problem(path, tol: float = USER_TOL, validate: bool = True) -> ProblemSpec:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFileError(f"cannot read spec file {path}: {exc}")
    if not isinstance(raw, dict):
        raise SpecFileError("spec file must contain a JSON object")
    n = raw.get("mesh", 201)
    if not isinstance(n, int) or n < 3:
        raise SpecFileError(f"mesh must be an integer >= 3, got {n!r}")
    track_raw = raw.get("track", "identity")
    if track_raw == "identity":
        track = identity_track()
    else:
        track = make_track(_knot_function(track_raw))
    diag_raw = raw.get("diagonal")
    if isinstance(diag_raw, str):
        delta = builtin_diagonal(diag_raw, n)
    elif isinstance(diag_raw, dict):
        delta = _knot_function(diag_raw)
    else:
        raise SpecFileError("spec file must name a diagonal")
    spec = make_diagonal(delta, track, tol=tol, validate=validate)
    psi_request = parse_psi_request(raw.get("psi", "lower"))
    return ProblemSpec(track, spec, psi_request, n)


def resolve_candidate(problem: ProblemSpec, request=None, tol: float = USER_TOL) -> PsiCandidate:
    request = problem.psi_request if request is None else request
    bounds = psi_bounds(problem.spec, tol=tol)
    if request == "lower":
        return quadruplet(problem.spec, bounds.psi_low, tol=tol)
    if request == "upper":
        return quadruplet(problem.spec, bounds.psi_up, tol=tol)
    if isinstance(request, tuple) and request[0] == "blend":
        low = quadruplet(problem.spec, bounds.psi_low, tol=tol)
        up = quadruplet(problem.spec, bounds.psi_up, tol=tol)
        return blend(low, up, request[1])
    return quadruplet(problem.spec, request, tol=tol)


def default_mesh(problem: ProblemSpec) -> np.ndarray:
    """Uniform mesh plus all spec knots and their track images."""
    uniform = np.linspace(0.0, 1.0, problem.mesh_n)
    knots = problem.spec.knots
    return merge_knots(uniform, knots, problem.spec.phi_values())


# ---------------------------------------------------------------------------
# file formats

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_function_csv(path, f: PLFunction):
    with open(path, "w") as fh:
        fh.write("x,value\n")
        for x, y in zip(f.x, f.y):
            fh.write(f"{_fmt(x)},{_fmt(y)}\n")


def write_grid_csv(path, grid: GridCopula):
    with open(path, "w") as fh:
        fh.write("," + ",".join(_fmt(m) for m in grid.mesh) + "\n")
        for x, row in zip(grid.mesh, grid.values):
            fh.write(_fmt(x) + "," + ",".join(_fmt(v) for v in row) + "\n")


def read_grid_csv(path) -> GridCopula:
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    header = lines[0].split(",")
    mesh = np.array([float(v) for v in header[1:]])
    rows = []
    row_mesh = []
    for line in lines[1:]:
        parts = line.split(",")
        row_mesh.append(float(parts[0]))
        rows.append([float(v) for v in parts[1:]])
    values = np.array(rows)
    if not np.array_equal(np.array(row_mesh), mesh):
        raise SpecFileError("grid CSV row and column meshes disagree")
    return GridCopula(mesh, values)


def write_json(path, payload: dict):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    problem = load_problem(args.spec, tol=args.tol, validate=False)
    conditions = diagonal_conditions(problem.spec.delta, problem.track, tol=args.tol)
    result = existence_check(problem.spec, tol=args.tol)
    if not args.quiet:
        for cond in "abcd":
            ok, where = conditions[cond]
            suffix = "" if ok else f" (violated near x={where:.6g})"
            print(f"condition ({cond}): {'ok' if ok else 'FAIL'}{suffix}")
        print(f"variational criterion: {'ok' if result.variational_ok else 'FAIL'}")
        print(f"lipschitz criterion:   {'ok' if result.lipschitz_ok else 'FAIL'}")
        if result.witness:
            print(f"witness interval: [{result.witness[0]:.6g}, {result.witness[1]:.6g}]")
        print(f"copula exists: {result.exists}")
    conditions_ok = all(ok for ok, _ in conditions.values())
    return 0 if (result.exists and conditions_ok) else 1


def cmd_bounds(args) -> int:
    problem = load_problem(args.spec, tol=args.tol)
    result = existence_check(problem.spec, tol=args.tol)
    if not result.exists:
        print(f"no copula exists; witness {result.witness}", file=sys.stderr)
        return 1
    bounds = psi_bounds(problem.spec, tol=args.tol)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_function_csv(out / "psi_lower.csv", bounds.psi_low)
    write_function_csv(out / "psi_upper.csv", bounds.psi_up)
    if not args.quiet:
        print(f"wrote {out / 'psi_lower.csv'} and {out / 'psi_upper.csv'}")
    return 0


def cmd_build(args) -> int:
    problem = load_problem(args.spec, tol=args.tol)
    candidate = resolve_candidate(problem, tol=args.tol)
    if not candidate.eligible:
        print(f"ineligible psi: {candidate.violation}", file=sys.stderr)
        return 1
    mesh = default_mesh(problem) if args.mesh is None else \
        merge_knots(np.linspace(0.0, 1.0, args.mesh), problem.spec.knots,
                    problem.spec.phi_values())
    grid = materialize_grid(problem.spec, candidate, mesh)
    cpsi = make_cpsi(problem.spec, candidate)
    report = check_grid(grid, mode="copula", tol=args.tol)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_grid_csv(out / "grid.csv", grid)
    with open(out / "region.csv", "w") as fh:
        fh.write("x,g,h\n")
        for x in cpsi.g.x:
            fh.write(f"{_fmt(x)},{_fmt(cpsi.g(x))},{_fmt(cpsi.h(x))}\n")
    write_json(out / "report.json", report.as_dict())
    if not args.quiet:
        print(f"copula checks: {'pass' if report.copula_ok else 'FAIL'}"
              f" (min cell volume {report.min_cell_volume:.3g})")
    return 0 if report.copula_ok else 1


def cmd_compare(args) -> int:
    problem = load_problem(args.spec, tol=args.tol)
    try:
        cand_a = resolve_candidate(problem, _psi_arg(args.psi_a), tol=args.tol)
        cand_b = resolve_candidate(problem, _psi_arg(args.psi_b), tol=args.tol)
    except TrackcopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not cand_a.eligible or not cand_b.eligible:
        bad = cand_a if not cand_a.eligible else cand_b
        print(f"ineligible psi: {bad.violation}", file=sys.stderr)
        return 1
    mesh = default_mesh(problem)
    grid_a = materialize_grid(problem.spec, cand_a, mesh)
    grid_b = materialize_grid(problem.spec, cand_b, mesh)
    result = compare(grid_a, grid_b, tol=args.tol)
    payload = result.as_dict()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "comparison.json", payload)
    if not args.quiet:
        print(json.dumps(payload))
    if result.relation == "equal":
        return 0
    if result.relation == "incomparable":
        return 3
    return 4


def _psi_arg(value):
    """psi given on the command line: lower | upper | blend:t | JSON file."""
    if value in ("lower", "upper") or value.startswith("blend:"):
        return parse_psi_request(value)
    try:
        with open(value) as fh:
            return _knot_function(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecFileError(f"cannot read psi file {value}: {exc}")


def cmd_envelope(args) -> int:
    problem = load_problem(args.spec, tol=args.tol)
    grid = read_grid_csv(args.grid)
    cpsi = dominating_envelope(grid, problem.track, problem.spec, tol=args.tol)
    env = materialize_grid(problem.spec, cpsi.candidate, grid.mesh)
    gain = float((env.values - grid.values).max())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_function_csv(out / "psi_extracted.csv", cpsi.candidate.psi)
    write_grid_csv(out / "envelope_grid.csv", env)
    if not args.quiet:
        print(f"max pointwise gain: {gain:.6g}")
    return 0


def cmd_splice(args) -> int:
    problem = load_problem(args.spec, tol=args.tol)
    try:
        upper = resolve_candidate(problem, _psi_arg(args.psi_upper), tol=args.tol)
        lower = resolve_candidate(problem, _psi_arg(args.psi_lower), tol=args.tol)
    except TrackcopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not upper.eligible or not lower.eligible:
        bad = upper if not upper.eligible else lower
        print(f"ineligible psi: {bad.violation}", file=sys.stderr)
        return 1
    mesh = default_mesh(problem)
    spliced = make_splice(upper, lower)
    grid = splice_grid(spliced, mesh)
    report = check_grid(grid, mode="quasi", tol=args.tol)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_grid_csv(out / "splice_grid.csv", grid)
    write_json(out / "report.json", report.as_dict())
    if not args.quiet:
        print(f"quasi-copula checks: {'pass' if report.quasi_ok else 'FAIL'};"
              f" copula checks: {'pass' if report.copula_ok else 'fail'} (reported only)")
    return 0 if report.quasi_ok else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trackcop",
                                     description="copulas with a prescribed track section")
    default_tol = float(os.environ.get("TRACKCOP_TOL", USER_TOL))
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        p.add_argument("--tol", type=float, default=default_tol,
                       help="user-facing slack (default 1e-9; env TRACKCOP_TOL)")
        p.add_argument("--mesh", type=int, default=None, help="override mesh size")
        p.add_argument("--quiet", action="store_true")
        if needs_out:
            p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("validate", help="check diagonal admissibility and existence")
    p.add_argument("spec")
    common(p, needs_out=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bounds", help="write the extremal mass functions")
    p.add_argument("spec")
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("build", help="materialize and verify a constructed copula")
    p.add_argument("spec")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("compare", help="pointwise order of two constructions")
    p.add_argument("spec")
    p.add_argument("psi_a")
    p.add_argument("psi_b")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("envelope", help="extract the dominating envelope of a grid")
    p.add_argument("grid")
    p.add_argument("spec")
    common(p)
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("splice", help="splice two constructions along the track")
    p.add_argument("spec")
    p.add_argument("psi_upper")
    p.add_argument("psi_lower")
    common(p)
    p.set_defaults(func=cmd_splice)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TrackcopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
