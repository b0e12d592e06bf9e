"""Points, weights, metrics, and directional widths.

Points are plain float64 numpy arrays: a single point has shape ``(dim,)``
and a point set has shape ``(n, dim)``.  Everything downstream builds on the
helpers here, so validation lives here too.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyPointSetError,
    InvalidParameterError,
    InvalidWeightError,
)

UNIT_NORM_TOL = 1e-9


def as_point(obj, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite float64 vector, optionally checking its dimension."""
    p = np.asarray(obj, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidParameterError(f"a point must be a 1-d sequence, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InvalidParameterError(f"point has non-finite coordinates: {p!r}")
    if dim is not None and p.shape[0] != dim:
        raise DimensionMismatchError(dim, p.shape[0])
    return p


def as_point_array(obj, dim: int | None = None) -> np.ndarray:
    """Coerce to a finite (n, dim) float64 array."""
    pts = np.asarray(obj, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1) if pts.size else pts.reshape(0, 0)
    if pts.ndim != 2:
        raise InvalidParameterError(f"a point set must be 2-d, got shape {pts.shape}")
    if pts.shape[0] == 0:
        raise EmptyPointSetError()
    if pts.shape[1] == 0:
        raise InvalidParameterError("points must have dimension >= 1")
    if not np.all(np.isfinite(pts)):
        raise InvalidParameterError("point set has non-finite coordinates")
    if dim is not None and pts.shape[1] != dim:
        raise DimensionMismatchError(dim, pts.shape[1])
    return pts


def unit_direction(v) -> np.ndarray:
    """Normalize ``v`` to unit length; rejects near-zero vectors."""
    u = as_point(v)
    norm = float(np.linalg.norm(u))
    if norm <= 0.0:
        raise InvalidParameterError("cannot normalize a zero vector")
    return u / norm


def _check_unit(u: np.ndarray) -> None:
    if abs(float(np.linalg.norm(u)) - 1.0) > UNIT_NORM_TOL:
        raise InvalidParameterError(f"direction is not a unit vector: {u!r}")


class Metric:
    """Distance function abstraction; subclass to plug in other metrics.

    Only the Euclidean instance ships, but the weighted reduction is written
    against this interface.
    """

    def distance(self, a: np.ndarray, b: np.ndarray) -> float:
        raise NotImplementedError

    def distances(self, points: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Distances from every row of ``points`` to ``q``; override to vectorize."""
        return np.array([self.distance(p, q) for p in points])


class EuclideanMetric(Metric):
    def distance(self, a, b) -> float:
        return float(np.sqrt(np.dot(a - b, a - b)))

    def distances(self, points, q) -> np.ndarray:
        diff = points - q
        return np.sqrt(np.einsum("ij,ij->i", diff, diff))


EUCLIDEAN = EuclideanMetric()


def distance(a, b) -> float:
    """Euclidean distance between two points of equal dimension."""
    pa = as_point(a)
    pb = as_point(b, dim=pa.shape[0])
    return EUCLIDEAN.distance(pa, pb)


def weighted_distance(q, p, weight: float) -> float:
    """Multiplicatively weighted distance ``weight * d(q, p)``."""
    if not (weight > 0.0):
        raise InvalidWeightError(f"weight must be positive, got {weight!r}")
    return weight * distance(q, p)


def normalize_weights(raw) -> tuple[np.ndarray, int]:
    """Scale weights into (0, 1] by dividing by the maximum.

    Returns the scaled weights and the index of the designated unit-weight
    point: the smallest index attaining the maximum.  Scaling by a positive
    constant preserves the argmax of every weighted-distance query.
    """
    w = np.asarray(raw, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise InvalidWeightError("weights must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise InvalidWeightError("weights must be finite and positive")
    top = int(np.argmax(w))
    scaled = w / w[top]
    if np.any(scaled <= 0.0):
        # underflow: ratio of smallest to largest below float range
        raise InvalidWeightError("weight ratio too extreme to normalize in float64")
    return scaled, top


def directional_width(points, u) -> float:
    """Extent of the projections of ``points`` onto the unit direction ``u``."""
    pts = as_point_array(points)
    uu = as_point(u, dim=pts.shape[1])
    _check_unit(uu)
    proj = pts @ uu
    return float(proj.max() - proj.min())


def directional_widths(points: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Widths along many unit directions at once (rows of ``directions``)."""
    proj = points @ directions.T
    return proj.max(axis=0) - proj.min(axis=0)


def sample_directions(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random unit vectors, for width spot-checks."""
    u = rng.normal(size=(count, dim))
    norms = np.linalg.norm(u, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return u / norms


@dataclass(frozen=True)
class WeightedPointSet:
    """An immutable point set with normalized multiplicative weights.

    ``weights`` lie in (0, 1] with ``weights[p1_index] == 1``, and
    ``p1_index`` is the smallest index attaining the maximum weight.
    """

    points: np.ndarray
    weights: np.ndarray
    p1_index: int
    dimension: int = field(init=False)

    def __post_init__(self):
        pts = as_point_array(self.points)
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (pts.shape[0],):
            raise InvalidWeightError(
                f"need one weight per point: {w.shape} vs {pts.shape[0]} points"
            )
        if np.any(w <= 0.0) or np.any(w > 1.0):
            raise InvalidWeightError("weights must be normalized into (0, 1]")
        top = int(np.argmax(w))
        if w[top] != 1.0 or top != self.p1_index:
            raise InvalidWeightError(
                "p1_index must be the first index of weight exactly 1"
            )
        pts = np.ascontiguousarray(pts)
        w = np.ascontiguousarray(w)
        pts.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "dimension", pts.shape[1])

    @classmethod
    def from_raw(cls, points, weights=None) -> "WeightedPointSet":
        """Build from raw positive weights (normalized here); None means all-ones."""
        pts = as_point_array(points)
        if weights is None:
            w = np.ones(pts.shape[0])
            return cls(pts, w, 0)
        norm, p1 = normalize_weights(weights)
        if norm.shape[0] != pts.shape[0]:
            raise InvalidWeightError(
                f"need one weight per point: {norm.shape[0]} vs {pts.shape[0]} points"
            )
        return cls(pts, norm, p1)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def p1(self) -> np.ndarray:
        return self.points[self.p1_index]
