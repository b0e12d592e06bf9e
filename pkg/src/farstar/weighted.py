"""Weighted farthest-neighbor queries reduced to unweighted ones.

The point set splits at weight ``eps / 2``.  Heavy points (``S1``) go into
geometric weight buckets, each backed by an unweighted kernel index built
with error ``eps / 2``; within a bucket weights agree to a factor
``1 + eps / 2``, so the bucket's unweighted answer re-scored by weight is
nearly optimal there.  Light points (``S2``) are sorted by distance from
the unit-weight point ``p1`` and pared down to a dominance staircase along
which the weighted distance from ``p1`` strictly decreases; a query binary
searches it for the first point beyond ``2 * d(p1, q) / eps``.  A query
returns the best of three candidates: the bucket winner, the staircase
point, and ``p1`` itself, which is within factor ``1 - eps`` of the true
weighted maximum.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidParameterError, InvalidWeightError, SerializationError
from .geometry import EUCLIDEAN, EuclideanMetric, Metric, WeightedPointSet, as_point
from .kernel import EpsilonKernel, UnweightedAfnIndex, _check_epsilon

WEIGHTED_INDEX_KIND = "weighted_afn_index"
FORMAT_VERSION = 1


def bucket_bounds(i: int, epsilon: float) -> tuple[float, float]:
    """Half-open weight interval (lo, hi] covered by bucket ``i``."""
    half = epsilon / 2.0
    return half * (1.0 + half) ** (i - 1), half * (1.0 + half) ** i


def bucket_index(weight: float, epsilon: float) -> int:
    """Smallest ``i >= 0`` with ``weight <= (eps/2) * (1 + eps/2)**i``.

    The closed-form ``ceil(log_{1+eps/2}(w / (eps/2)))`` is corrected
    against the exact float interval endpoints so membership is never off
    by one at a boundary.
    """
    eps = float(epsilon)
    if not (0.0 < eps < 2.0):
        raise InvalidParameterError(f"epsilon must be in (0, 2), got {epsilon!r}")
    half = eps / 2.0
    w = float(weight)
    if not (half <= w <= 1.0):
        raise InvalidWeightError(f"weight {w!r} outside [{half}, 1]")
    i = max(0, int(np.ceil(np.log(w / half) / np.log1p(half))))
    while w > bucket_bounds(i, eps)[1]:
        i += 1
    while i > 0 and w <= bucket_bounds(i, eps)[0]:
        i -= 1
    return i


def max_bucket_count(epsilon: float) -> int:
    """Ceiling on the number of nonempty buckets for a given epsilon."""
    return int(np.ceil((0.5 + 2.0 / epsilon) * np.log(2.0 / epsilon))) + 1


@dataclass(frozen=True)
class WeightBuckets:
    """Heavy points grouped by weight, one kernel index per bucket."""

    epsilon: float
    ids: np.ndarray  # bucket number per group, ascending
    members: tuple[np.ndarray, ...]  # original point indices per group
    indexes: tuple[UnweightedAfnIndex, ...]

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ParedFarList:
    """Dominance staircase over the light points.

    ``dists`` (from ``p1``) is nondecreasing while ``weighted_dists`` is
    strictly decreasing: each kept point weight-dominates every farther one.
    """

    indices: np.ndarray
    dists: np.ndarray
    weighted_dists: np.ndarray

    def __len__(self) -> int:
        return int(self.indices.shape[0])

    def first_at_or_beyond(self, radius: float) -> int | None:
        """Index (into the staircase) of the first entry with dist >= radius."""
        j = int(np.searchsorted(self.dists, radius, side="left"))
        return j if j < len(self) else None


class WeightedResult(NamedTuple):
    index: int
    point: np.ndarray
    weighted_distance: float


@dataclass(frozen=True)
class _FastPath:
    """Stacked per-bucket kernels for vectorized queries (Euclidean only)."""

    points: np.ndarray  # (M, dim) kernel points across buckets
    weights: np.ndarray  # (M,)
    source: np.ndarray  # (M,) original indices
    offsets: np.ndarray  # (B,) segment starts
    seg_lens: np.ndarray  # (B,)
    seg_of: np.ndarray  # (M,) bucket position per row


@dataclass(frozen=True)
class WeightedAfnIndex:
    point_set: WeightedPointSet
    epsilon: float
    buckets: WeightBuckets
    pared_s2: ParedFarList
    p1_index: int
    metric: Metric = EUCLIDEAN
    _fast: _FastPath | None = field(default=None, repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return self.point_set.dimension

    @property
    def kernel_size(self) -> int:
        """Total kernel points across buckets (the scanned working set)."""
        return int(sum(ix.kernel.size for ix in self.buckets.indexes))

    def query(self, q) -> WeightedResult:
        return weighted_query(self, q)


UnweightedFactory = Callable[[np.ndarray, float], UnweightedAfnIndex]


def _scan_factory(points: np.ndarray, epsilon: float) -> UnweightedAfnIndex:
    # exact index: the kernel is the whole bucket (valid for any epsilon)
    return UnweightedAfnIndex(
        EpsilonKernel(points, np.arange(points.shape[0]), epsilon), epsilon
    )


def build_weighted_index(
    point_set: WeightedPointSet,
    epsilon: float,
    metric: Metric = EUCLIDEAN,
    unweighted_factory: UnweightedFactory | None = None,
) -> WeightedAfnIndex:
    """Preprocess a normalized weighted point set for farthest queries.

    ``unweighted_factory`` builds the per-bucket index at error ``eps / 2``;
    the default is the kernel construction for Euclidean metrics and an
    exact scan otherwise.
    """
    eps = _check_epsilon(epsilon)
    if not isinstance(point_set, WeightedPointSet):
        raise InvalidWeightError(
            "build_weighted_index needs a WeightedPointSet (normalized weights)"
        )
    euclidean_default = unweighted_factory is None and isinstance(metric, EuclideanMetric)
    if unweighted_factory is None:
        unweighted_factory = (
            UnweightedAfnIndex.build if euclidean_default else _scan_factory
        )

    pts = point_set.points
    w = point_set.weights
    half = eps / 2.0
    heavy = w >= half  # weight exactly eps/2 counts as heavy
    s1 = np.flatnonzero(heavy)
    s2 = np.flatnonzero(~heavy)

    # bucket assignment, vectorized then boundary-corrected via bucket_index
    ids_raw = np.maximum(
        0, np.ceil(np.log(w[s1] / half) / np.log1p(half)).astype(int)
    )
    lo = half * (1.0 + half) ** (ids_raw - 1)
    hi = half * (1.0 + half) ** ids_raw
    off = np.flatnonzero((w[s1] > hi) | ((ids_raw > 0) & (w[s1] <= lo)))
    for j in off:
        ids_raw[j] = bucket_index(w[s1[j]], eps)

    order = np.lexsort((s1, ids_raw))
    s1_sorted = s1[order]
    ids_sorted = ids_raw[order]
    uniq, starts = np.unique(ids_sorted, return_index=True)
    bounds = np.append(starts, len(s1_sorted))
    members = tuple(
        s1_sorted[bounds[k] : bounds[k + 1]] for k in range(len(uniq))
    )
    indexes = tuple(unweighted_factory(pts[m], half) for m in members)
    buckets = WeightBuckets(eps, uniq, members, indexes)

    # pared far list over the light points
    p1 = point_set.p1
    if s2.size:
        d2 = metric.distances(pts[s2], p1)
        s2_order = np.lexsort((s2, d2))
        s2_sorted = s2[s2_order]
        d_sorted = d2[s2_order]
        dw_sorted = w[s2_sorted] * d_sorted
        later_max = np.concatenate(
            [np.maximum.accumulate(dw_sorted[::-1])[::-1][1:], [-np.inf]]
        )
        keep = dw_sorted > later_max
        pared = ParedFarList(
            s2_sorted[keep], d_sorted[keep], dw_sorted[keep]
        )
    else:
        pared = ParedFarList(
            np.empty(0, dtype=np.intp), np.empty(0), np.empty(0)
        )

    fast = None
    if euclidean_default and len(members):
        seg_lens = np.array([ix.kernel.size for ix in indexes])
        source = np.concatenate(
            [m[ix.kernel.indices] for m, ix in zip(members, indexes)]
        )
        fast = _FastPath(
            points=pts[source],
            weights=w[source],
            source=source,
            offsets=np.concatenate([[0], np.cumsum(seg_lens)[:-1]]),
            seg_lens=seg_lens,
            seg_of=np.repeat(np.arange(len(members)), seg_lens),
        )
    return WeightedAfnIndex(point_set, eps, buckets, pared, point_set.p1_index, metric, fast)


def _bucket_round(index: WeightedAfnIndex, q: np.ndarray) -> tuple[int, float] | None:
    """Best bucket candidate: per-bucket unweighted winner, re-scored by weight."""
    fast = index._fast
    if fast is not None:
        diff = fast.points - q
        d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        seg_max = np.maximum.reduceat(d, fast.offsets)
        at_max = np.flatnonzero(d >= np.repeat(seg_max, fast.seg_lens))
        first = at_max[
            np.searchsorted(fast.seg_of[at_max], np.arange(len(fast.seg_lens)))
        ]
        scored = fast.weights[first] * d[first]
        j = int(np.argmax(scored))
        return int(fast.source[first[j]]), float(scored[j])

    if not len(index.buckets):
        return None
    w = index.point_set.weights
    best: tuple[int, float] | None = None
    for m, ix in zip(index.buckets.members, index.buckets.indexes):
        local = ix.query(q)
        orig = int(m[local.index])
        scored = float(w[orig]) * index.metric.distance(index.point_set.points[orig], q)
        if best is None or scored > best[1]:
            best = (orig, scored)
    return best


def weighted_query(index: WeightedAfnIndex, q) -> WeightedResult:
    """Approximate weighted farthest neighbor of ``q``.

    Guarantees ``w(r) * d(q, r) >= (1 - eps) * max_p w(p) * d(q, p)``; the
    returned value is the true weighted distance of the returned point.
    """
    ps = index.point_set
    qq = as_point(q, dim=ps.dimension)

    best_i = index.p1_index
    best_v = float(index.metric.distance(ps.p1, qq))  # w(p1) == 1

    cand = _bucket_round(index, qq)
    if cand is not None and cand[1] > best_v:
        best_i, best_v = cand

    pared = index.pared_s2
    if len(pared):
        radius = 2.0 * index.metric.distance(ps.p1, qq) / index.epsilon
        j = pared.first_at_or_beyond(radius)
        if j is not None:
            orig = int(pared.indices[j])
            v = float(ps.weights[orig]) * index.metric.distance(ps.points[orig], qq)
            if v > best_v:
                best_i, best_v = orig, v

    return WeightedResult(best_i, ps.points[best_i], best_v)


def brute_force_weighted(point_set: WeightedPointSet, q, metric: Metric = EUCLIDEAN) -> WeightedResult:
    """Exact weighted farthest neighbor by linear scan; the test oracle."""
    qq = as_point(q, dim=point_set.dimension)
    vals = point_set.weights * metric.distances(point_set.points, qq)
    i = int(np.argmax(vals))
    return WeightedResult(i, point_set.points[i], float(vals[i]))


def index_to_json(index: WeightedAfnIndex) -> str:
    """Versioned JSON embedding buckets, per-bucket kernels, and the staircase."""
    ps = index.point_set
    payload = {
        "version": FORMAT_VERSION,
        "kind": WEIGHTED_INDEX_KIND,
        "epsilon": index.epsilon,
        "dimension": ps.dimension,
        "p1_index": index.p1_index,
        "points": [list(map(float, p)) for p in ps.points],
        "weights": [float(x) for x in ps.weights],
        "buckets": [
            {
                "bucket": int(b),
                "members": [int(i) for i in m],
                "kernel": [int(m[k]) for k in ix.kernel.indices],
            }
            for b, m, ix in zip(
                index.buckets.ids, index.buckets.members, index.buckets.indexes
            )
        ],
        "pared_s2": {
            "indices": [int(i) for i in index.pared_s2.indices],
            "dists": [float(x) for x in index.pared_s2.dists],
            "weighted_dists": [float(x) for x in index.pared_s2.weighted_dists],
        },
    }
    return json.dumps(payload, indent=2)


def index_from_json(text: str) -> WeightedAfnIndex:
    """Rebuild an index exactly as serialized (kernels are not recomputed)."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise SerializationError("top-level JSON value must be an object")
    if payload.get("kind") != WEIGHTED_INDEX_KIND:
        raise SerializationError(f"unexpected kind {payload.get('kind')!r}")
    if payload.get("version") != FORMAT_VERSION:
        raise SerializationError(f"unsupported version {payload.get('version')!r}")
    pts = np.asarray(payload["points"], dtype=float)
    w = np.asarray(payload["weights"], dtype=float)
    eps = _check_epsilon(payload["epsilon"])
    try:
        ps = WeightedPointSet(pts, w, int(payload["p1_index"]))
    except InvalidWeightError as exc:
        raise SerializationError(f"stored weights invalid: {exc}") from exc
    if ps.dimension != payload["dimension"]:
        raise SerializationError("dimension field disagrees with point data")

    half = eps / 2.0
    ids, members, indexes = [], [], []
    for rec in payload["buckets"]:
        m = np.asarray(rec["members"], dtype=np.intp)
        kern_orig = np.asarray(rec["kernel"], dtype=np.intp)
        pos = {int(v): k for k, v in enumerate(m)}
        try:
            local = np.array([pos[int(v)] for v in kern_orig], dtype=np.intp)
        except KeyError as exc:
            raise SerializationError(f"kernel index {exc} not a bucket member") from exc
        if local.size == 0:
            raise SerializationError("bucket with empty kernel")
        ids.append(int(rec["bucket"]))
        members.append(m)
        indexes.append(
            UnweightedAfnIndex(EpsilonKernel(ps.points[m], local, half), half)
        )
    buckets = WeightBuckets(eps, np.asarray(ids), tuple(members), tuple(indexes))

    rec = payload["pared_s2"]
    pared = ParedFarList(
        np.asarray(rec["indices"], dtype=np.intp),
        np.asarray(rec["dists"], dtype=float),
        np.asarray(rec["weighted_dists"], dtype=float),
    )

    fast = None
    if members:
        seg_lens = np.array([ix.kernel.size for ix in indexes])
        source = np.concatenate(
            [m[ix.kernel.indices] for m, ix in zip(members, indexes)]
        )
        fast = _FastPath(
            points=ps.points[source],
            weights=ps.weights[source],
            source=source,
            offsets=np.concatenate([[0], np.cumsum(seg_lens)[:-1]]),
            seg_lens=seg_lens,
            seg_of=np.repeat(np.arange(len(members)), seg_lens),
        )
    return WeightedAfnIndex(ps, eps, buckets, pared, ps.p1_index, EUCLIDEAN, fast)
