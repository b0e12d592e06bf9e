"""Star-network dilation: per-hub estimates and approximate hub selection.

With hub ``c``, traffic between leaves ``v`` and ``w`` travels
``|vc| + |wc|`` instead of ``|vw|``; the detour ratio is ``delta(c, v, w)``
and the star's dilation ``Delta(c)`` is its maximum over candidate pairs.
Evaluating every input point as a hub naively costs a pair scan per point.
Instead each pair is summarized by its midpoint ``q`` carrying weight
``2 / |vw|``; then ``w * |qc|`` never exceeds ``delta(c, v, w)`` and, once
the detour is large, matches it closely.  A weighted farthest-neighbor
index over the midpoints answers per-hub queries, each either certified
directly (high dilation) or settled exactly (low dilation), so the
reported values sandwich the truth:
``(1 - eps) * Delta(p_i) <= est <= Delta(p_i)``.

The hub is the argmin of the estimates; its true dilation is within a
``1 / (1 - eps)`` factor of the best input point's.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    CenterSolveError,
    DegenerateStarError,
    DuplicatePointsError,
    EmptyPointSetError,
    InvalidParameterError,
)
from .geometry import WeightedPointSet, as_point, as_point_array, normalize_weights
from .weighted import WeightedAfnIndex, build_weighted_index
from .wspd import representative_pairs

MAX_SOLVER_ITERATIONS = 100_000
DEFAULT_CENTER_TOL = 1e-7

CLASS_EXACT_LOW = "exact-low"
CLASS_CERTIFIED_HIGH = "certified-high"
CLASS_FALLBACK_EXACT = "fallback-exact"


def delta(c, v, w) -> float:
    """Detour ratio (|vc| + |wc|) / |vw| of routing pair (v, w) through c."""
    cc = as_point(c)
    vv = as_point(v, dim=cc.shape[0])
    ww = as_point(w, dim=cc.shape[0])
    direct = float(np.linalg.norm(vv - ww))
    if direct == 0.0:
        raise DegenerateStarError("dilation undefined for a coincident pair (v == w)")
    return (float(np.linalg.norm(vv - cc)) + float(np.linalg.norm(ww - cc))) / direct


@dataclass(frozen=True)
class GammaSplit:
    """Error budget split between certification and index queries.

    ``epsilon1`` feeds the certification threshold ``gamma = 2/eps1 - 1``;
    ``epsilon2`` is the farthest-neighbor index error.  The two compose to
    ``(1 - eps1)(1 - eps2) >= 1 - epsilon``.
    """

    epsilon: float
    epsilon1: float
    epsilon2: float
    gamma: float

    def __post_init__(self) -> None:
        if not (0.0 < self.epsilon < 1.0):
            raise InvalidParameterError(
                f"epsilon must be in (0, 1), got {self.epsilon!r}"
            )
        if not (0.0 < self.epsilon1 < 1.0 and 0.0 < self.epsilon2 < 1.0):
            raise InvalidParameterError("epsilon1 and epsilon2 must be in (0, 1)")
        if (1.0 - self.epsilon1) * (1.0 - self.epsilon2) < (1.0 - self.epsilon) - 1e-12:
            raise InvalidParameterError(
                "split does not compose: (1-eps1)(1-eps2) < 1-epsilon"
            )
        if self.gamma <= 1.0:
            raise InvalidParameterError(f"gamma must exceed 1, got {self.gamma!r}")

    @classmethod
    def even(cls, epsilon: float) -> "GammaSplit":
        """Split with eps1 = eps2 = 1 - sqrt(1 - epsilon) (exact composition)."""
        eps = float(epsilon)
        if not (0.0 < eps < 1.0):
            raise InvalidParameterError(f"epsilon must be in (0, 1), got {epsilon!r}")
        e1 = 1.0 - float(np.sqrt(1.0 - eps))
        return cls(eps, e1, e1, 2.0 / e1 - 1.0)


@dataclass(frozen=True)
class CandidatePairSet:
    """Index pairs whose detours are guaranteed to realize every hub's maximum.

    All-pairs mode satisfies the guarantee trivially.  WSPD mode keeps one
    representative pair per well-separated group pair — far fewer pairs,
    but the guarantee becomes heuristic; use it for exploration, not
    certification.
    """

    pairs: np.ndarray  # (m, 2) with i < j
    mode: str  # "all-pairs" | "wspd"

    def __post_init__(self) -> None:
        p = np.asarray(self.pairs, dtype=np.intp)
        if p.ndim != 2 or p.shape[1] != 2:
            raise InvalidParameterError("pairs must be an (m, 2) index array")
        if p.size and not (p[:, 0] < p[:, 1]).all():
            raise InvalidParameterError("each pair must be ordered i < j")
        object.__setattr__(self, "pairs", p)

    def __len__(self) -> int:
        return int(self.pairs.shape[0])

    @classmethod
    def all_pairs(cls, n: int) -> "CandidatePairSet":
        i, j = np.triu_indices(n, k=1)
        return cls(np.column_stack([i, j]), "all-pairs")

    @classmethod
    def wspd(cls, points, epsilon: float) -> "CandidatePairSet":
        """Representative pairs at separation 4/eps1 for the even split."""
        e1 = GammaSplit.even(epsilon).epsilon1
        return cls(representative_pairs(points, 4.0 / e1), "wspd")


def reject_duplicate_points(points: np.ndarray) -> None:
    """Raise naming the first coincident index pair, if any."""
    pts = np.asarray(points, dtype=float)
    order = np.lexsort(pts.T[::-1])
    same = (pts[order[1:]] == pts[order[:-1]]).all(axis=1)
    hit = np.flatnonzero(same)
    if hit.size:
        a, b = int(order[hit[0]]), int(order[hit[0] + 1])
        raise DuplicatePointsError(min(a, b), max(a, b))


def _pair_geometry(points: np.ndarray, pairs: CandidatePairSet):
    pi, pj = pairs.pairs[:, 0], pairs.pairs[:, 1]
    seg = np.linalg.norm(points[pi] - points[pj], axis=1)
    z = np.flatnonzero(seg == 0.0)
    if z.size:
        raise DuplicatePointsError(int(pi[z[0]]), int(pj[z[0]]))
    return pi, pj, seg


def exact_dilation(c, points, pairs: CandidatePairSet | None = None) -> float:
    """Largest detour ratio over candidate pairs with hub ``c``.

    Pairs touching ``c`` itself (coordinate-identical input points) are
    skipped, since a hub does not route to itself.
    """
    pts = as_point_array(points)
    cc = as_point(c, dim=pts.shape[1])
    if pairs is None:
        pairs = CandidatePairSet.all_pairs(pts.shape[0])
    pi, pj, seg = _pair_geometry(pts, pairs)
    dist = np.linalg.norm(pts - cc, axis=1)
    if np.count_nonzero(dist) < 2:
        raise DegenerateStarError("need at least 2 non-hub points")
    alive = (dist[pi] > 0.0) & (dist[pj] > 0.0)
    if not alive.any():
        raise DegenerateStarError("no candidate pair avoids the hub")
    vals = (dist[pi[alive]] + dist[pj[alive]]) / seg[alive]
    return float(vals.max())


@dataclass(frozen=True)
class CentroidIndex:
    """Pair midpoints with weights 2/|p_i p_j|, searchable by any hub.

    ``query`` lower-bounds ``Delta(c)`` for every hub (midpoint triangle
    inequality) and is within ``1 + w|qc|`` of it, which is a relative
    ``(1 - eps1)`` once the dilation reaches ``gamma``.
    """

    points: np.ndarray
    pairs: CandidatePairSet
    centroids: np.ndarray
    weight_scale: float  # raw max of 2/|p_i p_j|; index weights are raw/scale
    index: WeightedAfnIndex
    epsilon2: float

    @classmethod
    def build(
        cls, points, pairs: CandidatePairSet, epsilon2: float
    ) -> "CentroidIndex":
        pts = as_point_array(points)
        if not len(pairs):
            raise EmptyPointSetError("candidate pair set is empty")
        pi, pj, seg = _pair_geometry(pts, pairs)
        centroids = (pts[pi] + pts[pj]) / 2.0
        raw_w = 2.0 / seg
        scaled, p1 = normalize_weights(raw_w)
        ps = WeightedPointSet(centroids, scaled, p1)
        return cls(
            pts, pairs, centroids, float(raw_w[p1]),
            build_weighted_index(ps, epsilon2), epsilon2,
        )

    def query(self, c) -> float:
        """Approximate max over pairs of w_{i,j} * |q_{i,j} c| (raw units)."""
        res = self.index.query(c)
        return res.weighted_distance * self.weight_scale


@dataclass(frozen=True)
class CenterResult:
    center: np.ndarray
    value: float
    iterations: int


def _pair_objective(points: np.ndarray, pairs: CandidatePairSet):
    pi, pj, seg = _pair_geometry(points, pairs)
    inv = 1.0 / seg
    a_pts, b_pts = points[pi], points[pj]

    def value_subgrad(c: np.ndarray) -> tuple[float, np.ndarray]:
        di = np.linalg.norm(a_pts - c, axis=1)
        dj = np.linalg.norm(b_pts - c, axis=1)
        vals = (di + dj) * inv
        a = int(np.argmax(vals))
        g = np.zeros(points.shape[1])
        if di[a] > 0.0:
            g += (c - a_pts[a]) / di[a]
        if dj[a] > 0.0:
            g += (c - b_pts[a]) / dj[a]
        return float(vals[a]), inv[a] * g

    return value_subgrad


def _polyak(value_subgrad, start, tol, max_iter):
    """Polyak-step subgradient descent with an adaptive level gap.

    The step targets ``best - gap``; after 40 non-improving steps the gap
    halves, and the run converges once the gap falls below ``tol`` of the
    best value.  Returns (center, value, converged, iterations).
    """
    c = np.array(start, dtype=float)
    fc, g = value_subgrad(c)
    best_f, best_c = fc, c.copy()
    gap = max(0.25 * abs(best_f), 10.0 * tol)
    stall = 0
    it = 0
    while it < max_iter:
        it += 1
        gn2 = float(g @ g)
        if gn2 <= 1e-300:
            return best_c, best_f, True, it
        c = c - ((fc - (best_f - gap)) / gn2) * g
        fc, g = value_subgrad(c)
        if fc < best_f - 1e-15 * max(1.0, abs(best_f)):
            best_f, best_c = fc, c.copy()
            stall = 0
        else:
            stall += 1
            if stall >= 40:
                gap *= 0.5
                stall = 0
                if gap <= tol * max(1.0, abs(best_f)):
                    return best_c, best_f, True, it
    return best_c, best_f, False, it


def solve_unconstrained_center(
    points,
    pairs: CandidatePairSet | None = None,
    tol: float = DEFAULT_CENTER_TOL,
) -> CenterResult:
    """Minimize the max detour ratio over all of R^D (hub not restricted to P).

    The objective is convex (a max of sums of norms), so subgradient
    descent with Polyak-style steps converges; multi-start from the
    centroid and every bounding-box corner guards against slow starts.
    Non-convergence within the iteration cap raises ``CenterSolveError``
    carrying the best iterate, which callers may still use.
    """
    pts = as_point_array(points)
    if pts.shape[0] < 2:
        raise EmptyPointSetError("center solve needs at least 2 points")
    if tol <= 0.0:
        raise InvalidParameterError(f"tol must be positive, got {tol!r}")
    if pairs is None:
        pairs = CandidatePairSet.all_pairs(pts.shape[0])
    objective = _pair_objective(pts, pairs)

    lo, hi = pts.min(axis=0), pts.max(axis=0)
    starts = [pts.mean(axis=0)]
    starts += [np.array(corner) for corner in itertools.product(*zip(lo, hi))]
    per_start = max(1, MAX_SOLVER_ITERATIONS // len(starts))

    best = None
    total = 0
    all_converged = True
    for s in starts:
        c, f, ok, its = _polyak(objective, s, tol, per_start)
        total += its
        all_converged = all_converged and ok
        if best is None or f < best[1]:
            best = (c, f)
    if not all_converged:
        raise CenterSolveError(best[0], best[1])
    return CenterResult(best[0], best[1], total)


@dataclass(frozen=True)
class DilationReport:
    """Per-hub dilation estimates with their provenance.

    ``values[i]`` sandwiches the true dilation of hub ``points[i]``:
    ``(1 - epsilon) * Delta <= values[i] <= Delta``.  ``classifications``
    records how each value was obtained; ``hub_index`` / ``hub_value`` are
    the argmin (lowest index on ties).
    """

    values: np.ndarray
    classifications: tuple[str, ...]
    epsilon: float
    mode: str
    split: GammaSplit
    hub_index: int
    hub_value: float

    def __len__(self) -> int:
        return int(self.values.shape[0])


def approx_all_dilations(
    points,
    epsilon: float,
    mode: str = "adaptive",
    k: int | None = None,
    pairs: CandidatePairSet | None = None,
    parallel: bool = False,
) -> DilationReport:
    """Estimate every input point's star dilation within factor (1 - epsilon).

    Adaptive mode queries the centroid index per hub and certifies the
    answer whenever it reaches ``gamma`` (sound because the query never
    exceeds the true dilation); all other hubs fall back to an exact pair
    scan, labeled ``exact-low``.  paper-k mode instead fixes the exact set
    up front as the ``k`` hubs nearest the unconstrained optimal center;
    the rest still certify, or scan as ``fallback-exact`` when the query
    value lands below ``gamma``, keeping the sandwich unconditional.
    """
    pts = as_point_array(points)
    n = pts.shape[0]
    if n < 3:
        raise DegenerateStarError("dilation report needs at least 3 points")
    reject_duplicate_points(pts)
    split = GammaSplit.even(epsilon)
    if mode not in ("adaptive", "paper-k"):
        raise InvalidParameterError(f"unknown mode {mode!r}")
    if mode == "paper-k":
        if k is None or not (0 <= int(k) <= n):
            raise InvalidParameterError("paper-k mode needs k in [0, n]")
        k = int(k)
    if pairs is None:
        pairs = CandidatePairSet.all_pairs(n)

    cindex = CentroidIndex.build(pts, pairs, split.epsilon2)

    forced_exact = np.zeros(n, dtype=bool)
    if mode == "paper-k" and k > 0:
        try:
            center = solve_unconstrained_center(pts, pairs).center
        except CenterSolveError as exc:
            center = exc.best_center
        order = np.lexsort((np.arange(n), np.linalg.norm(pts - center, axis=1)))
        forced_exact[order[:k]] = True

    def estimate(i: int) -> tuple[float, str]:
        if forced_exact[i]:
            return exact_dilation(pts[i], pts, pairs), CLASS_EXACT_LOW
        v = cindex.query(pts[i])
        if v >= split.gamma:
            return v, CLASS_CERTIFIED_HIGH
        label = CLASS_FALLBACK_EXACT if mode == "paper-k" else CLASS_EXACT_LOW
        return exact_dilation(pts[i], pts, pairs), label

    if parallel:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(estimate, range(n)))
    else:
        results = [estimate(i) for i in range(n)]

    values = np.array([r[0] for r in results])
    labels = tuple(r[1] for r in results)
    hub = int(np.argmin(values))
    return DilationReport(
        values, labels, float(epsilon), mode, split, hub, float(values[hub])
    )


def select_hub(report: DilationReport) -> tuple[int, float]:
    """Hub minimizing the estimated dilation (lowest index on ties)."""
    if not len(report):
        raise EmptyPointSetError("empty dilation report")
    i = int(np.argmin(report.values))
    return i, float(report.values[i])
