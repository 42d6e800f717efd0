"""Command line front end.

Four subcommands: `solve` runs a solver on an instance file,
`verify-centerpoint` audits a claimed centerpoint against a search
space, `volume` reports exact (and optionally Monte-Carlo) volumes, and
`benchmark` sweeps a method/parameter matrix into a CSV.  Exact numbers
print as p/q with a 12-digit decimal alongside; reports can be written
as JSON (matching the shipped schema) and CSV rows with a fixed column
order.  Errors surface as machine-readable JSON on stdout with exit
code 2; exit code 1 means "ran fine, property does not hold".
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .centerpoint import verify_centerpoint
from .decompose import sqrt_block_solve
from .errors import InstanceFormatError, LinfFixpointError
from .instances import ContractionInstance, load_instance, random_affine
from .rational import Rat, rat, rat_decimal, rat_str
from .serialize import load_space, parse_point, pyramid_from_json
from .solver import SolveReport, banach_solve, centerpoint_solve
from .volume import (
    monte_carlo_volume,
    pyramid_intersection_volume,
    search_space_volume,
    space_and_pyramid_volumes,
)
from .volume.oracle import default_oracle

CSV_COLUMNS = [
    "method",
    "d",
    "lambda",
    "epsilon",
    "queries",
    "residual",
    "iterations",
    "wall_ms",
]


def _fmt(value: Rat) -> str:
    return f"{rat_str(value)} (= {rat_decimal(value)})"


def _write_json(path: str, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _append_csv_row(path: str, report: SolveReport) -> None:
    target = Path(path)
    fresh = not target.exists() or target.stat().st_size == 0
    with target.open("a", newline="") as fh:
        writer = csv.writer(fh)
        if fresh:
            writer.writerow(CSV_COLUMNS)
        writer.writerow(
            [
                report.method,
                report.d,
                rat_str(report.lam),
                rat_str(report.eps),
                report.queries,
                rat_str(report.residual),
                report.iterations,
                f"{report.wall_ms:.3f}",
            ]
        )


def _run_method(
    method: str,
    inst: ContractionInstance,
    eps: Rat,
    start: tuple | None,
    trace: str,
    cached: bool,
) -> SolveReport:
    if method == "banach":
        return banach_solve(inst, eps, start=start, trace=trace)  # type: ignore[arg-type]
    if method == "centerpoint":
        return centerpoint_solve(
            inst, eps, oracle=default_oracle(cached), trace=trace  # type: ignore[arg-type]
        )
    if method == "decomposed":
        return sqrt_block_solve(inst, eps, oracle=default_oracle(cached))
    raise InstanceFormatError(f"unknown method {method!r}")


def cmd_solve(args: argparse.Namespace) -> int:
    inst = load_instance(args.instance)
    eps = rat(args.epsilon)
    start = parse_point(args.start) if args.start else None
    report = _run_method(
        args.method, inst, eps, start, args.trace, not args.no_cache
    )
    payload = report.to_jsonable()
    payload["instance"] = inst.label
    if args.trace == "none":
        payload.pop("trace", None)
    print(f"method      {report.method}")
    print(f"instance    {inst.label} (d={report.d}, lambda={rat_str(report.lam)})")
    print(f"epsilon     {_fmt(report.eps)}")
    print(f"queries     {report.queries}")
    print(f"iterations  {report.iterations}")
    print(f"residual    {_fmt(report.residual)}")
    for i, x in enumerate(report.answer):
        print(f"answer[{i}]   {_fmt(x)}")
    if args.json_out:
        _write_json(args.json_out, payload)
    if args.csv:
        _append_csv_row(args.csv, report)
    return 0 if report.succeeded else 1


def cmd_verify_centerpoint(args: argparse.Namespace) -> int:
    space = load_space(args.space)
    point = parse_point(args.point)
    alpha = rat(args.alpha) if args.alpha else rat(1, 4 * space.d)
    oracle = default_oracle(not args.no_cache)
    result = verify_centerpoint(space, point, alpha, oracle)
    ratio = (
        result.worst_volume / result.space_volume
        if result.space_volume > 0
        else rat(0)
    )
    print(f"space volume    {_fmt(result.space_volume)}")
    print(f"claimed alpha   {_fmt(alpha)}")
    print(f"worst direction {list(result.worst_direction.signs)}")
    print(f"worst volume    {_fmt(result.worst_volume)}")
    print(f"worst ratio     {_fmt(ratio)}")
    print("certified" if result.certified else "NOT certified")
    if args.json_out:
        _write_json(
            args.json_out,
            {
                "certified": result.certified,
                "alpha": rat_str(alpha),
                "space_volume": rat_str(result.space_volume),
                "worst_direction": list(result.worst_direction.signs),
                "worst_volume": rat_str(result.worst_volume),
                "worst_ratio": rat_str(ratio),
            },
        )
    return 0 if result.certified else 1


def cmd_volume(args: argparse.Namespace) -> int:
    space = load_space(args.space)
    pyramid = None
    if args.pyramid:
        pyramid = pyramid_from_json(json.loads(args.pyramid))
        if pyramid.dimension != space.d:
            raise InstanceFormatError("pyramid dimension differs from space")
    if args.dump_arrangement:
        queries = (pyramid,) if pyramid is not None else ()
        exact, per, decomp = space_and_pyramid_volumes(space, queries)
        value = per[0] if pyramid is not None else exact
        if decomp is None:
            raise InstanceFormatError(
                "no arrangement to dump in dimension 1 (interval bypass)"
            )
        _write_json(args.dump_arrangement, decomp.to_jsonable())
    elif pyramid is not None:
        value = pyramid_intersection_volume(space, pyramid)
    else:
        value = search_space_volume(space)
    label = "vol(space ^ pyramid)" if pyramid is not None else "vol(space)"
    print(f"{label}  {_fmt(value)}")
    payload = {"exact": rat_str(value), "exact_decimal": rat_decimal(value)}
    if args.mc_samples:
        est = monte_carlo_volume(
            space, pyramid, samples=args.mc_samples, seed=args.seed
        )
        sigmas = (
            abs(est.value - float(value)) / est.stderr if est.stderr > 0 else 0.0
        )
        print(
            f"monte-carlo     {est.value:.6f} +- {est.stderr:.6f} "
            f"({est.samples} samples, seed {est.seed}, {sigmas:.2f} sigma off exact)"
        )
        payload["monte_carlo"] = {
            "value": est.value,
            "stderr": est.stderr,
            "samples": est.samples,
            "seed": est.seed,
        }
    if args.json_out:
        _write_json(args.json_out, payload)
    return 0


def _benchmark_cells(doc: dict, matrix_dir: Path, base_seed: int) -> list[dict]:
    cells = doc.get("cells", [])
    if not isinstance(cells, list):
        raise InstanceFormatError('benchmark matrix needs a "cells" list')
    out = []
    for idx, cell in enumerate(cells):
        if not isinstance(cell, dict):
            raise InstanceFormatError("benchmark cells must be objects")
        entry = dict(cell)
        entry.setdefault("seed", base_seed + idx)
        if "instance" in entry and entry["instance"]:
            entry["instance_path"] = str((matrix_dir / entry["instance"]).resolve())
        out.append(entry)
    return out


def cmd_benchmark(args: argparse.Namespace) -> int:
    matrix_path = Path(args.matrix)
    try:
        doc = json.loads(matrix_path.read_text())
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"invalid JSON in {args.matrix}: {exc}") from exc
    base_seed = doc.get("seed", args.seed)
    cells = _benchmark_cells(doc, matrix_path.parent, base_seed)
    target = Path(args.csv)
    with target.open("w", newline="") as fh:
        csv.writer(fh).writerow(CSV_COLUMNS)
    summaries = []
    for cell in cells:
        method = cell.get("method", "centerpoint")
        eps = rat(cell.get("epsilon", "1/100"))
        if "instance_path" in cell:
            inst = load_instance(cell["instance_path"])
        else:
            d = int(cell.get("d", 1))
            lam = rat(cell.get("lambda", "9/10"))
            inst = random_affine(d, lam, int(cell["seed"]))
        raw_start = cell.get("start")
        if isinstance(raw_start, list):
            start = tuple(rat(s) for s in raw_start)
        elif raw_start:
            start = parse_point(raw_start)
        else:
            start = None
        report = _run_method(
            method, inst, eps, start, "none", not args.no_cache
        )
        _append_csv_row(args.csv, report)
        line = (
            f"{method:12s} d={report.d} lambda={rat_str(report.lam):9s} "
            f"eps={rat_str(report.eps):8s} queries={report.queries:6d} "
            f"residual={rat_decimal(report.residual)}"
        )
        print(line)
        summaries.append(report.to_jsonable() | {"instance": inst.label})
    if args.json_out:
        _write_json(args.json_out, {"rows": summaries})
    print(f"wrote {len(cells)} rows to {args.csv}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linf-fixpoint",
        description="Approximate fixed points of Chebyshev contractions "
        "on the unit cube, with exact-geometry solvers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run a solver on an instance file")
    solve.add_argument("--instance", required=True, help="instance JSON path")
    solve.add_argument("--epsilon", required=True, help="target residual, e.g. 1/100")
    solve.add_argument(
        "--method",
        default="centerpoint",
        choices=["banach", "centerpoint", "decomposed"],
    )
    solve.add_argument("--start", help="start point for banach, e.g. 0,0")
    solve.add_argument(
        "--trace", default="summary", choices=["none", "summary", "full"]
    )
    solve.add_argument("--no-cache", action="store_true",
                       help="use the stateless reference volume oracle")
    solve.add_argument("--json-out", help="write the solve report as JSON")
    solve.add_argument("--csv", help="append a CSV row for this run")
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser(
        "verify-centerpoint", help="audit a centerpoint claim on a search space"
    )
    verify.add_argument("--space", required=True, help="search space JSON path")
    verify.add_argument("--point", required=True, help="candidate point, e.g. 1/2,1/2")
    verify.add_argument("--alpha", help="claimed quality (default 1/(4d))")
    verify.add_argument("--no-cache", action="store_true")
    verify.add_argument("--json-out")
    verify.set_defaults(func=cmd_verify_centerpoint)

    volume = sub.add_parser("volume", help="exact and Monte-Carlo volumes")
    volume.add_argument("--space", required=True, help="search space JSON path")
    volume.add_argument(
        "--pyramid",
        help='pyramid JSON, e.g. \'{"axis":0,"sign":-1,"apex":["1","1"]}\'',
    )
    volume.add_argument("--mc-samples", type=int, default=0)
    volume.add_argument("--seed", type=int, default=0)
    volume.add_argument(
        "--dump-arrangement", help="write the arrangement cells as JSON"
    )
    volume.add_argument("--json-out")
    volume.set_defaults(func=cmd_volume)

    bench = sub.add_parser("benchmark", help="sweep a method matrix into CSV")
    bench.add_argument("--matrix", required=True, help="matrix JSON path")
    bench.add_argument("--csv", required=True, help="output CSV path")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--no-cache", action="store_true")
    bench.add_argument("--json-out")
    bench.set_defaults(func=cmd_benchmark)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LinfFixpointError as exc:
        print(json.dumps(exc.payload()))
        return 2
    except FileNotFoundError as exc:
        print(json.dumps({"error": "file-not-found", "message": str(exc)}))
        return 2


if __name__ == "__main__":
    sys.exit(main())
