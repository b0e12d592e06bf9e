"""Build a weighted farthest-neighbor index and race it against the scan.

Three clusters with log-uniform weights: a heavy point near the query can
beat a distant light one, so plain farthest-point logic is not enough.
"""

import time

import numpy as np

from farstar import WeightedPointSet, build_weighted_index, brute_force_weighted
from farstar.datasets import generate_points, generate_weights

rng = np.random.default_rng(7)
n = 50_000
pts = generate_points("clustered", n, 2, rng)
w = generate_weights("log-uniform", n, rng)
ps = WeightedPointSet.from_raw(pts, w)

eps = 0.1
t0 = time.perf_counter()
index = build_weighted_index(ps, eps)
print(f"built index for n={n} at eps={eps} in {time.perf_counter() - t0:.3f}s")
print(f"kernel points kept across buckets: {index.kernel_size}")

queries = rng.uniform(-0.5, 1.5, (8, 2))
print(f"{'query':>22} {'approx':>12} {'exact':>12} {'ratio':>7}")
for q in queries:
    res = index.query(q)
    exact = brute_force_weighted(ps, q)
    # score the returned point with the same arithmetic as the oracle
    got = ps.weights[res.index] * np.linalg.norm(ps.points[res.index] - q)
    print(
        f"({q[0]:8.3f}, {q[1]:8.3f}) {got:12.5f} "
        f"{exact.weighted_distance:12.5f} {got / exact.weighted_distance:7.4f}"
    )

t0 = time.perf_counter()
for q in queries:
    index.query(q)
index_t = time.perf_counter() - t0
t0 = time.perf_counter()
for q in queries:
    brute_force_weighted(ps, q)
scan_t = time.perf_counter() - t0
print(f"\nindex: {index_t / 8 * 1e6:.1f} us/query, scan: {scan_t / 8 * 1e6:.1f} us/query")
