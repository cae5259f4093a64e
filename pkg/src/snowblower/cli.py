"""Command-line entry point: ``snowblower <verb> [flags]``.

Exit codes: 0 ok, 2 parse error, 3 validation failure, 4 planner failure,
5 oracle limits exhausted, 6 simulation violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable

from . import bounds
from .errors import (InfeasibleInstance, OracleExhausted, ParseError, PlanningError,
                     SimulationError, ValidationError)
from .grid import PixelDomain, parse_ascii, render_ascii, render_svg
from .instances import GenSpec, GenerationError, generate
from .sim import ThrowModel, Tour, simulate
from .voronoi import decompose, decomposition_json, voronoi_assignment

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_PLANNER = 4
EXIT_ORACLE = 5
EXIT_SIMULATION = 6

_EXIT_FOR: list[tuple[type[BaseException], int, str]] = [
    (ParseError, EXIT_PARSE, "parse"),
    (ValidationError, EXIT_VALIDATION, "validation"),
    (PlanningError, EXIT_PLANNER, "planner"),
    (GenerationError, EXIT_PLANNER, "generation"),
    (OracleExhausted, EXIT_ORACLE, "oracle-exhausted"),
    (SimulationError, EXIT_SIMULATION, "simulation"),
]


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _domain(path: str) -> PixelDomain:
    return parse_ascii(_read(path))


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _int(text: str) -> int:
    """Integer flag that also accepts forms like ``5e7``."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text}") from None
    if value != int(value):
        raise argparse.ArgumentTypeError(f"not an integer: {text}")
    return int(value)


def _planner(model: ThrowModel) -> Callable[[PixelDomain, int], Tour]:
    return bounds._planners()[model]


# -- verbs ------------------------------------------------------------------------

def _plan_one(domain: PixelDomain, model: ThrowModel, D: int) -> tuple[Tour, bounds.RatioRow]:
    tour = _planner(model)(domain, D)
    return tour, bounds.ratio_row(domain, D, model, tour)


def _plan_file(job: tuple[str, str, str, int]) -> dict:
    src, out_dir, model, D = job
    domain = parse_ascii(Path(src).read_text())
    tour, row = _plan_one(domain, ThrowModel(model), D)
    (Path(out_dir) / (Path(src).stem + ".tour.json")).write_text(tour.to_json() + "\n")
    return {"file": Path(src).name, **row.to_dict()}


def cmd_plan(args) -> int:
    model = ThrowModel(args.model)
    src = Path(args.input)
    if args.input != "-" and src.is_dir():
        out_dir = Path(args.out or src)
        out_dir.mkdir(parents=True, exist_ok=True)
        jobs = [(str(p), str(out_dir), model.value, args.depth) for p in sorted(src.glob("*.txt"))]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                rows = list(pool.map(_plan_file, jobs))
        else:
            rows = [_plan_file(j) for j in jobs]
        _write(args.report, _csv(rows))
        return EXIT_OK
    domain = _domain(args.input)
    tour, row = _plan_one(domain, model, args.depth)
    _write(args.out, tour.to_json() + "\n")
    report = _dumps(row.to_dict())
    if args.report:
        _write(args.report, report)
    elif args.out not in (None, "-"):
        sys.stdout.write(report)
    return EXIT_OK


def _csv(rows: list[dict]) -> str:
    out = io.StringIO()
    if rows:
        writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return out.getvalue()


def cmd_simulate(args) -> int:
    domain = _domain(args.input)
    tour = Tour.from_json(_read(args.tour))
    report = simulate(domain, tour, ThrowModel(args.model), args.depth)
    _write(args.out, _dumps(report.to_dict()))
    return EXIT_OK


def cmd_decompose(args) -> int:
    domain = _domain(args.input)
    _write(args.out, decomposition_json(decompose(domain)) + "\n")
    return EXIT_OK


def cmd_bounds(args) -> int:
    domain = _domain(args.input)
    lb = bounds.lower_bounds(domain, args.depth, voronoi_assignment(domain))
    _write(args.out, _dumps({"snow": lb.snow, "distance": str(lb.distance)}))
    return EXIT_OK


def cmd_oracle(args) -> int:
    domain = _domain(args.input)
    limits = bounds.OracleLimits(args.max_states, args.max_cost)
    try:
        opt = bounds.optimal_cost_exhaustive(domain, ThrowModel(args.model), args.depth, limits)
    except InfeasibleInstance:
        _write(args.out, _dumps({"opt": None, "feasible": False}))
        return EXIT_OK
    _write(args.out, _dumps({"opt": opt}))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.count == 1 and args.out_dir is None:
        domain = generate(GenSpec(args.pixels, args.seed, args.min_width))
        _write(args.out, render_ascii(domain))
        return EXIT_OK
    out_dir = Path(args.out_dir or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = args.seed + i
        domain = generate(GenSpec(args.pixels, seed, args.min_width))
        (out_dir / f"map_{seed:06d}.txt").write_text(render_ascii(domain))
    return EXIT_OK


def cmd_render(args) -> int:
    domain = _domain(args.input)
    depth = None
    if args.tour:
        if not args.model or args.depth is None:
            raise ParseError("render --tour needs --model and --depth")
        report = simulate(domain, Tour.from_json(_read(args.tour)), ThrowModel(args.model),
                          args.depth)
        depth = report.final_state.depth
    if args.format == "svg":
        _write(args.out, render_svg(domain, depth=depth))
    else:
        _write(args.out, render_ascii(domain))
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snowblower",
                                     description="Plan and verify snowblower tours.")
    parser.add_argument("--error-json", action="store_true",
                        help="print errors as a JSON object on stderr")
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--error-json", action="store_true", default=argparse.SUPPRESS,
                        help="print errors as a JSON object on stderr")
    sub = parser.add_subparsers(dest="verb", required=True)
    models = [m.value for m in ThrowModel]

    def common(p, model=True, depth=True, depth_required=True):
        p.add_argument("--in", dest="input", required=True, help="ASCII map file, '-' for stdin")
        p.add_argument("--out", help="output file (default stdout)")
        if model:
            p.add_argument("--model", choices=models, required=True)
        if depth:
            p.add_argument("--depth", type=int, required=depth_required, help="snow depth bound D")

    p = sub.add_parser("plan", parents=[shared], help="plan a tour and report it against the lower bounds")
    common(p)
    p.add_argument("--report", help="ratio report file (JSON, or CSV for a directory)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for a map directory")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", parents=[shared], help="simulate a tour and print the report")
    common(p)
    p.add_argument("--tour", required=True, help="tour JSON file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("decompose", parents=[shared], help="Voronoi decomposition as JSON")
    common(p, model=False, depth=False)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("bounds", parents=[shared], help="snow and distance lower bounds")
    common(p, model=False)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("oracle", parents=[shared], help="exhaustive optimum for tiny domains")
    common(p)
    p.add_argument("--max-states", type=_int, default=bounds.OracleLimits.max_states)
    p.add_argument("--max-cost", type=_int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", parents=[shared], help="generate random maps")
    p.add_argument("--pixels", type=int, required=True, help="target pixel count")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--min-width", type=int, default=1, help="minimum feature width")
    p.add_argument("--count", type=int, default=1, help="number of maps, seeds counting up")
    p.add_argument("--out", help="output file for a single map (default stdout)")
    p.add_argument("--out-dir", help="directory for map_<seed>.txt files")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("render", parents=[shared], help="render a map, optionally after a tour")
    common(p, model=False, depth=False)
    p.add_argument("--format", choices=["ascii", "svg"], default="ascii")
    p.add_argument("--tour", help="tour JSON; renders the remaining snow (svg)")
    p.add_argument("--model", choices=models)
    p.add_argument("--depth", type=int)
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as e:
        for cls, code, kind in _EXIT_FOR:
            if isinstance(e, cls):
                break
        else:
            if isinstance(e, ValueError):
                code, kind = EXIT_PARSE, "parse"
            else:
                raise
        if args.error_json:
            sys.stderr.write(_dumps({"error": kind, "exit_code": code, "message": str(e)}))
        else:
            sys.stderr.write(f"snowblower: {kind} error: {e}\n")
        return code


if __name__ == "__main__":
    sys.exit(main())
