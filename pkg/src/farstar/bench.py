"""Benchmark harness: index queries against a linear-scan baseline.

Timings use the monotonic clock, median over ``repeats`` passes after one
discarded warmup pass.  Everything except the timing columns is a pure
function of (sizes, dim, epsilons, seed), so repeated runs agree byte for
byte on the structural columns.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, fields

import numpy as np

from .dataio import format_float
from .datasets import generate_points, generate_weights
from .errors import InvalidParameterError
from .geometry import WeightedPointSet
from .weighted import build_weighted_index

DEFAULT_REPEATS = 5


@dataclass(frozen=True)
class BenchRecord:
    n: int
    D: int
    epsilon: float
    build_time: float
    mean_query_time: float
    speedup_vs_scan: float
    kernel_size: int


def _median_time(fn, repeats: int) -> float:
    fn()  # warmup, discarded
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return float(np.median(samples))


def run_bench(
    sizes,
    dim: int,
    epsilons,
    seed: int,
    queries: int = 200,
    repeats: int = DEFAULT_REPEATS,
) -> list[BenchRecord]:
    """One record per (n, epsilon); scan baseline shares the query batch."""
    sizes = [int(s) for s in sizes]
    if sizes != sorted(sizes):
        raise InvalidParameterError("sizes must be ascending")
    if repeats < 1 or queries < 1:
        raise InvalidParameterError("repeats and queries must be >= 1")
    eps_list = [float(e) for e in np.atleast_1d(epsilons)]

    out: list[BenchRecord] = []
    for n in sizes:
        rng = np.random.default_rng(seed)
        pts = generate_points("uniform-cube", n, dim, rng)
        w = generate_weights("log-uniform", n, rng)
        ps = WeightedPointSet.from_raw(pts, w)
        qs = rng.random((queries, dim))
        for eps in eps_list:
            t0 = time.perf_counter()
            index = build_weighted_index(ps, eps)
            build_time = time.perf_counter() - t0

            def run_queries():
                for q in qs:
                    index.query(q)

            def run_scan():
                for q in qs:
                    vals = ps.weights * np.linalg.norm(ps.points - q, axis=1)
                    int(np.argmax(vals))

            q_time = _median_time(run_queries, repeats) / queries
            s_time = _median_time(run_scan, repeats) / queries
            out.append(
                BenchRecord(
                    n=n,
                    D=dim,
                    epsilon=eps,
                    build_time=build_time,
                    mean_query_time=q_time,
                    speedup_vs_scan=s_time / q_time,
                    kernel_size=index.kernel_size,
                )
            )
    return out


def records_to_csv(records: list[BenchRecord]) -> str:
    cols = [f.name for f in fields(BenchRecord)]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in records:
        writer.writerow(
            [
                str(getattr(r, c))
                if c in ("n", "D", "kernel_size")
                else format_float(getattr(r, c))
                for c in cols
            ]
        )
    return buf.getvalue()
