"""Oracle-versus-approximation verification suites.

Each suite replays a guarantee against brute force on a concrete dataset:
weighted farthest answers against the linear scan, kernel widths against
sampled directions, the bucket/staircase structural invariants, and (for
small inputs) the dilation sandwich against the exhaustive per-hub oracle.
A report passes only with zero violations; the worst observed ratio is
1.0 when every answer was exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dilation import approx_all_dilations, exact_dilation, reject_duplicate_points
from .errors import DuplicatePointsError
from .geometry import WeightedPointSet, directional_widths, sample_directions
from .kernel import build_kernel
from .weighted import WeightedAfnIndex, build_weighted_index, max_bucket_count

WIDTH_DIRECTIONS = 1000
DILATION_ORACLE_LIMIT = 300


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    violations: int = 0
    worst_ratio: float = 1.0
    skipped: str | None = None
    first_violation: dict | None = None

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, ratio: float, detail: dict) -> None:
        self.checks += 1
        if ratio < self.worst_ratio:
            self.worst_ratio = ratio
        if detail is not None and ratio < detail.get("threshold", 0.0):
            self.violations += 1
            if self.first_violation is None:
                self.first_violation = {"ratio": ratio, **detail}


@dataclass
class VerifyReport:
    epsilon: float
    seed: int
    suites: list[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    @property
    def worst_ratio(self) -> float:
        ran = [s.worst_ratio for s in self.suites if s.skipped is None]
        return min(ran) if ran else 1.0

    def to_text(self) -> str:
        lines = []
        for s in self.suites:
            if s.skipped is not None:
                lines.append(f"suite {s.name}: skipped ({s.skipped})")
                continue
            lines.append(
                f"suite {s.name}: {s.checks} checks, {s.violations} violations,"
                f" worst ratio {s.worst_ratio:.9f}"
            )
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(f"VERIFY {verdict} (worst ratio {self.worst_ratio:.9f})")
        return "\n".join(lines)


def _query_box(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = points.min(axis=0), points.max(axis=0)
    pad = 0.5 * np.maximum(hi - lo, 1e-9)
    return lo - pad, hi + pad


def _weighted_suite(
    ps: WeightedPointSet,
    index: WeightedAfnIndex,
    epsilon: float,
    trials: int,
    rng: np.random.Generator,
) -> SuiteResult:
    suite = SuiteResult("weighted-afn")
    lo, hi = _query_box(ps.points)
    threshold = 1.0 - epsilon
    for _ in range(trials):
        q = rng.uniform(lo, hi)
        vals = ps.weights * np.linalg.norm(ps.points - q, axis=1)
        true_max = float(vals.max())
        if true_max == 0.0:
            suite.record(1.0, {"threshold": threshold})
            continue
        res = index.query(q)
        got = float(vals[res.index])  # same arithmetic path as the oracle
        suite.record(
            got / true_max,
            {
                "threshold": threshold,
                "query": [float(x) for x in q],
                "answer_index": int(res.index),
                "answer_value": got,
                "true_max": true_max,
            },
        )
    return suite


def _width_suite(
    ps: WeightedPointSet,
    index: WeightedAfnIndex,
    epsilon: float,
    rng: np.random.Generator,
) -> SuiteResult:
    """Every kernel in the index, plus a fresh top-level kernel at epsilon."""
    suite = SuiteResult("kernel-width")
    dirs = sample_directions(ps.dimension, WIDTH_DIRECTIONS, rng)
    jobs = [(ps.points, build_kernel(ps.points, epsilon).indices, epsilon)]
    for m, ix in zip(index.buckets.members, index.buckets.indexes):
        jobs.append((ps.points[m], ix.kernel.indices, ix.epsilon))
    for pts, kidx, eps in jobs:
        wp = directional_widths(pts, dirs)
        wk = directional_widths(pts[kidx], dirs)
        alive = wp > 0.0
        ratios = np.ones_like(wp)
        ratios[alive] = wk[alive] / wp[alive]
        worst = int(np.argmin(ratios))
        suite.record(
            float(ratios[worst]),
            {
                "threshold": 1.0 - eps,
                "direction": [float(x) for x in dirs[worst]],
                "kernel_size": int(len(kidx)),
                "subset_size": int(pts.shape[0]),
            },
        )
    return suite


def _structure_suite(index: WeightedAfnIndex, epsilon: float) -> SuiteResult:
    suite = SuiteResult("structure")

    def check(ok: bool, what: str) -> None:
        suite.record(
            1.0 if ok else 0.0, {"threshold": 0.5, "invariant": what}
        )

    b = index.buckets
    check(len(b) <= max_bucket_count(epsilon), "bucket count within bound")
    ratio_cap = (1.0 + epsilon / 2.0) * (1.0 + 1e-12)
    w = index.point_set.weights
    for m in b.members:
        bw = w[m]
        check(float(bw.max()) <= float(bw.min()) * ratio_cap, "bucket weight ratio")
    for ix in b.indexes:
        check(ix.kernel.size >= 1, "bucket kernel nonempty")
    p = index.pared_s2
    if len(p) > 1:
        check(bool(np.all(np.diff(p.dists) >= 0.0)), "staircase dists sorted")
        check(
            bool(np.all(np.diff(p.weighted_dists) < 0.0)),
            "staircase weighted dists strictly decreasing",
        )
    return suite


def _dilation_suite(ps: WeightedPointSet, epsilon: float) -> SuiteResult:
    suite = SuiteResult("dilation-sandwich")
    n = ps.n
    if n < 3:
        suite.skipped = "needs at least 3 points"
        return suite
    if n > DILATION_ORACLE_LIMIT:
        suite.skipped = f"n > {DILATION_ORACLE_LIMIT} (oracle too slow)"
        return suite
    try:
        reject_duplicate_points(ps.points)
    except DuplicatePointsError as exc:
        suite.skipped = f"duplicate points ({exc})"
        return suite
    report = approx_all_dilations(ps.points, epsilon)
    threshold = 1.0 - epsilon
    for i in range(n):
        true = exact_dilation(ps.points[i], ps.points)
        est = float(report.values[i])
        # est must land in [(1-eps)*true, true]; over-the-top is ratio 0
        ratio = est / true if est <= true * (1.0 + 1e-12) else 0.0
        suite.record(
            ratio,
            {
                "threshold": threshold,
                "center_index": i,
                "estimate": est,
                "true_dilation": true,
                "classification": report.classifications[i],
            },
        )
    return suite


def verify_dataset(
    points,
    weights,
    epsilon: float,
    trials: int,
    seed: int,
    index: WeightedAfnIndex | None = None,
) -> VerifyReport:
    """Run every applicable suite; pass iff no guarantee is violated.

    When ``index`` is supplied (e.g. loaded from disk) it is verified
    as-is against the dataset instead of building a fresh one — the
    negative control for corrupted serializations.
    """
    pts = np.asarray(points, dtype=float)
    ps = WeightedPointSet.from_raw(pts, weights)
    if index is None:
        index = build_weighted_index(ps, epsilon)
    rng = np.random.default_rng(seed)
    report = VerifyReport(epsilon=float(epsilon), seed=int(seed))
    report.suites.append(_weighted_suite(ps, index, epsilon, trials, rng))
    report.suites.append(_width_suite(ps, index, epsilon, rng))
    report.suites.append(_structure_suite(index, epsilon))
    report.suites.append(_dilation_suite(ps, epsilon))
    return report
