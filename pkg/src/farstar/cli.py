"""Command-line interface: generate, build, query, dilation, hub, bench, verify.

All randomness flows from a single ``--seed``; every non-timing output is
byte-identical across reruns with the same flags.  Exit codes: 0 success,
1 guarantee violation (verify), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import weighted
from .dataio import format_float, load_points, points_to_csv, save_text
from .datasets import DISTRIBUTIONS, WEIGHT_MODELS, generate_points, generate_weights
from .dilation import CandidatePairSet, approx_all_dilations
from .errors import FarstarError
from .geometry import WeightedPointSet
from .verify import verify_dataset

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        save_text(path, text)


def _load_weighted_set(path: str) -> WeightedPointSet:
    pts, w = load_points(path)
    return WeightedPointSet.from_raw(pts, w)


def _cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    pts = generate_points(
        args.distribution, args.n, args.dim, rng, tuple(args.radius_range)
    )
    weights = None
    if args.weight_model != "unit":
        weights = generate_weights(
            args.weight_model, args.n, rng, tuple(args.weight_range)
        )
    _write_output(points_to_csv(pts, weights), args.output)
    return EXIT_OK


def _cmd_build(args) -> int:
    ps = _load_weighted_set(args.input)
    index = weighted.build_weighted_index(ps, args.eps)
    _write_output(weighted.index_to_json(index), args.output)
    return EXIT_OK


def _cmd_query(args) -> int:
    index = weighted.index_from_json(Path(args.input).read_text(encoding="utf-8"))
    qs: list[np.ndarray] = []
    if args.queries is not None:
        qpts, _ = load_points(args.queries)
        qs.extend(np.asarray(q, dtype=float) for q in qpts)
    for coords in args.point or []:
        qs.append(np.asarray(coords, dtype=float))
    if not qs:
        raise FarstarError("no query points: pass --queries FILE and/or --point X Y ...")

    if args.parallel:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(index.query, qs))
    else:
        results = [index.query(q) for q in qs]

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["query_index", "point_index", "weighted_distance"])
    for i, res in enumerate(results):
        writer.writerow([i, res.index, format_float(res.weighted_distance)])
    _write_output(buf.getvalue(), args.output)
    return EXIT_OK


def _dilation_report(args):
    pts, _ = load_points(args.input)  # weights ignored for dilation
    pairs = None
    if args.pairs == "wspd":
        pairs = CandidatePairSet.wspd(pts, args.eps)
    return approx_all_dilations(
        pts,
        args.eps,
        mode=args.mode,
        k=args.k,
        pairs=pairs,
        parallel=args.parallel,
    )


def _cmd_dilation(args) -> int:
    report = _dilation_report(args)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "dilation_approx", "classification"])
    for i, (v, label) in enumerate(zip(report.values, report.classifications)):
        writer.writerow([i, format_float(v), label])
    _write_output(buf.getvalue(), args.output)
    return EXIT_OK


def _cmd_hub(args) -> int:
    report = _dilation_report(args)
    payload = {
        "hub_index": report.hub_index,
        "dilation_approx": report.hub_value,
        "epsilon": report.epsilon,
        "mode": report.mode,
    }
    _write_output(json.dumps(payload, indent=2), args.output)
    return EXIT_OK


def _cmd_bench(args) -> int:
    records = bench_mod.run_bench(
        args.sizes, args.dim, args.eps, args.seed, queries=args.queries
    )
    _write_output(bench_mod.records_to_csv(records), args.output)
    return EXIT_OK


def _cmd_verify(args) -> int:
    pts, w = load_points(args.input)
    index = None
    if args.index is not None:
        index = weighted.index_from_json(Path(args.index).read_text(encoding="utf-8"))
        ps = WeightedPointSet.from_raw(pts, w)
        if index.point_set.n != ps.n or index.dimension != ps.dimension:
            raise FarstarError("index shape does not match the dataset")
    report = verify_dataset(pts, w, args.eps, args.trials, args.seed, index=index)
    print(report.to_text())
    if report.passed:
        return EXIT_OK
    replay = {
        "kind": "verify_replay",
        "version": 1,
        "dataset": args.input,
        "index": args.index,
        "epsilon": args.eps,
        "trials": args.trials,
        "seed": args.seed,
        "suites": [
            {
                "name": s.name,
                "checks": s.checks,
                "violations": s.violations,
                "worst_ratio": s.worst_ratio,
                "first_violation": s.first_violation,
            }
            for s in report.suites
            if s.skipped is None
        ],
    }
    out = args.output or "replay.json"
    save_text(out, json.dumps(replay, indent=2))
    print(f"replay artifact written to {out}", file=sys.stderr)
    return EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="farstar",
        description=(
            "Approximate weighted farthest-neighbor indexes and "
            "minimum-dilation star hubs."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, eps=False, seed=False, output=True):
        if eps:
            p.add_argument("--eps", type=float, required=True, help="target epsilon in (0,1)")
        if seed:
            p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
        if output:
            p.add_argument("--output", help="output path (default: stdout)")

    p = sub.add_parser("gen", help="generate a synthetic point CSV")
    p.add_argument("distribution", choices=DISTRIBUTIONS)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--weight-model", choices=WEIGHT_MODELS, default="unit")
    p.add_argument(
        "--weight-range", type=float, nargs=2, default=[1e-3, 1.0],
        metavar=("LO", "HI"),
    )
    p.add_argument(
        "--radius-range", type=float, nargs=2, default=[0.5, 1.0],
        metavar=("R_IN", "R_OUT"),
    )
    add_common(p, seed=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("build", help="build a weighted farthest-neighbor index")
    p.add_argument("--input", required=True, help="point CSV")
    add_common(p, eps=True)
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("query", help="run queries against a built index")
    p.add_argument("--input", required=True, help="index JSON from `build`")
    p.add_argument("--queries", help="CSV of query points")
    p.add_argument(
        "--point", type=float, nargs="+", action="append", metavar="X",
        help="inline query point (repeatable)",
    )
    p.add_argument("--parallel", action="store_true")
    add_common(p)
    p.set_defaults(func=_cmd_query)

    for name, fn in (("dilation", _cmd_dilation), ("hub", _cmd_hub)):
        p = sub.add_parser(
            name,
            help=(
                "per-point approximate star dilations"
                if name == "dilation"
                else "select the approximately best star hub"
            ),
        )
        p.add_argument("--input", required=True, help="point CSV (weights ignored)")
        p.add_argument("--mode", choices=["adaptive", "paper-k"], default="adaptive")
        p.add_argument("--k", type=int, help="exact-set size for paper-k mode")
        p.add_argument("--pairs", choices=["all", "wspd"], default="all")
        p.add_argument("--parallel", action="store_true")
        add_common(p, eps=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("bench", help="benchmark queries vs a linear scan")
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--eps", type=float, nargs="+", required=True)
    p.add_argument("--queries", type=int, default=200)
    add_common(p, seed=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("verify", help="replay guarantees against brute force")
    p.add_argument("--input", required=True, help="point CSV")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--index", help="verify this serialized index instead of building")
    add_common(p, eps=True, seed=True)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FarstarError as exc:
        print(f"farstar: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"farstar: i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
