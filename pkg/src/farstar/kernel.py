"""Extent kernels and the unweighted approximate farthest-neighbor index.

A kernel is a small subset ``K`` of a point set ``P`` that preserves every
directional width up to a factor ``1 - eps``.  Scanning ``K`` instead of
``P`` then answers farthest-neighbor queries with the same guarantee:
``d(q, r) >= (1 - eps) * max_p d(q, p)``.

Construction: bring ``P`` into near-isotropic position with an affine map
derived from iteratively chosen extreme points (so a thin or skewed cloud
becomes fat), overlay a grid of unit directions with angular step
``~ sqrt(eps)`` on the transformed sphere, and keep the extreme point of
each direction.  The direction count grows as ``eps**-((dim-1)/2)``; when
the grid would be at least as large as ``P`` itself the kernel is simply
all of ``P``, which is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError, SerializationError
from .geometry import as_point, as_point_array

# Angular step is STEP_FACTOR * sqrt(eps).  Worst-case polytopes can lose
# width linearly in the step near long hull edges, so the factor is kept
# small; the width property is enforced empirically by the test suite.
STEP_FACTOR = 0.25

KERNEL_INDEX_KIND = "afn_kernel_index"
FORMAT_VERSION = 1


def _check_epsilon(epsilon: float) -> float:
    eps = float(epsilon)
    if not (0.0 < eps < 1.0):
        raise InvalidParameterError(f"epsilon must be in (0, 1), got {epsilon!r}")
    return eps


def _angular_step(epsilon: float) -> float:
    return STEP_FACTOR * np.sqrt(epsilon)


def direction_count(dim: int, epsilon: float) -> int:
    """Number of grid directions used at this dimension and accuracy.

    Cheap to evaluate without materializing the grid, so builds can take the
    exact all-points shortcut early.
    """
    eps = _check_epsilon(epsilon)
    if dim == 1:
        return 2
    step = _angular_step(eps)
    if dim == 2:
        m = int(np.ceil(2.0 * np.pi / step))
        return m + (m % 2)
    # boundary lattice of a cube, normalized onto the sphere
    k = int(np.ceil(1.0 / step))
    return (2 * k + 1) ** dim - (2 * k - 1) ** dim


def direction_grid(dim: int, epsilon: float) -> np.ndarray:
    """Symmetric unit-direction grid with angular resolution ``~ sqrt(eps)``."""
    eps = _check_epsilon(epsilon)
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    step = _angular_step(eps)
    if dim == 2:
        m = int(np.ceil(2.0 * np.pi / step))
        m += m % 2  # keep the grid antipodally symmetric
        ang = 2.0 * np.pi * np.arange(m) / m
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    k = int(np.ceil(1.0 / step))
    axes = [np.arange(-k, k + 1)] * dim
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    grid = grid[np.max(np.abs(grid), axis=1) == k].astype(float)
    return grid / np.linalg.norm(grid, axis=1, keepdims=True)


def _isotropic_position(points: np.ndarray) -> np.ndarray:
    """Map the set affinely into [0, 1]^dim so its shape is roughly round.

    Basis axes come from extreme points: the far pair approximating the
    diameter, then repeatedly the point farthest from the flat spanned so
    far (Gram-Schmidt residual).  Axes with no spread are left unscaled.
    """
    n, dim = points.shape
    p0 = points[0]
    v0 = int(np.argmax(np.linalg.norm(points - p0, axis=1)))
    v1 = int(np.argmax(np.linalg.norm(points - points[v0], axis=1)))
    rel = points - points[v0]
    scale = float(np.max(np.abs(rel)))
    if scale == 0.0:
        return np.zeros_like(points)
    tiny = 1e-12 * scale

    basis: list[np.ndarray] = []
    first = rel[v1]
    if np.linalg.norm(first) > tiny:
        basis.append(first / np.linalg.norm(first))
        resid = rel - np.outer(rel @ basis[0], basis[0])
        while len(basis) < dim:
            norms = np.linalg.norm(resid, axis=1)
            j = int(np.argmax(norms))
            if norms[j] <= tiny:
                break
            b = resid[j] / norms[j]
            basis.append(b)
            resid = resid - np.outer(resid @ b, b)
    if len(basis) < dim:
        # complete a degenerate basis with arbitrary orthogonal directions
        stacked = np.concatenate(
            [np.array(basis).reshape(len(basis), dim).T, np.eye(dim)], axis=1
        )
        q, _ = np.linalg.qr(stacked)
        full = q[:, :dim].T
    else:
        full = np.array(basis)

    proj = rel @ full.T
    lo = proj.min(axis=0)
    ext = proj.max(axis=0) - lo
    ext = np.where(ext > tiny, ext, 1.0)
    return (proj - lo) / ext


@dataclass(frozen=True)
class EpsilonKernel:
    """Subset of a point set preserving directional widths to factor (1 - epsilon)."""

    points: np.ndarray
    indices: np.ndarray
    epsilon: float

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.intp)
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)

    @property
    def size(self) -> int:
        return int(self.indices.shape[0])

    @property
    def kernel_points(self) -> np.ndarray:
        return self.points[self.indices]


def build_kernel(points, epsilon: float) -> EpsilonKernel:
    """Select the width-preserving subset; deterministic in its inputs."""
    pts = as_point_array(points)
    eps = _check_epsilon(epsilon)
    n, dim = pts.shape
    if n <= direction_count(dim, eps):
        return EpsilonKernel(pts, np.arange(n), eps)
    grid = direction_grid(dim, eps)
    iso = _isotropic_position(pts)
    picks = np.argmax(iso @ grid.T, axis=0)
    # axis extremes are kept as anchors; they cost 2*dim points at most
    anchors = np.concatenate([np.argmin(pts, axis=0), np.argmax(pts, axis=0)])
    indices = np.unique(np.concatenate([picks, anchors]))
    return EpsilonKernel(pts, indices, eps)


class FarthestResult(NamedTuple):
    index: int
    point: np.ndarray
    distance: float


@dataclass(frozen=True)
class UnweightedAfnIndex:
    """Farthest-neighbor queries answered by scanning the kernel sequentially."""

    kernel: EpsilonKernel
    epsilon: float

    @classmethod
    def build(cls, points, epsilon: float) -> "UnweightedAfnIndex":
        eps = _check_epsilon(epsilon)
        return cls(build_kernel(points, eps), eps)

    @property
    def points(self) -> np.ndarray:
        return self.kernel.points

    def query(self, q) -> FarthestResult:
        return afn_query(self, q)


def afn_query(index: UnweightedAfnIndex, q) -> FarthestResult:
    """Scan the kernel for the point farthest from ``q``.

    The returned distance is within factor ``1 - epsilon`` of the true
    maximum over the full set; ties break to the lowest point index.
    """
    pts = index.kernel.points
    qq = as_point(q, dim=pts.shape[1])
    kp = index.kernel.kernel_points
    diff = kp - qq
    dists = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    local = int(np.argmax(dists))
    orig = int(index.kernel.indices[local])
    return FarthestResult(orig, pts[orig], float(dists[local]))


def brute_force_farthest(points, q) -> FarthestResult:
    """Exact farthest neighbor by linear scan; the test oracle."""
    pts = as_point_array(points)
    qq = as_point(q, dim=pts.shape[1])
    dists = np.linalg.norm(pts - qq, axis=1)
    i = int(np.argmax(dists))
    return FarthestResult(i, pts[i], float(dists[i]))


def index_to_json(index: UnweightedAfnIndex) -> str:
    """Versioned JSON with stable field order; floats round-trip losslessly."""
    payload = {
        "version": FORMAT_VERSION,
        "kind": KERNEL_INDEX_KIND,
        "epsilon": index.epsilon,
        "dimension": int(index.points.shape[1]),
        "kernel_indices": [int(i) for i in index.kernel.indices],
        "points": [list(map(float, p)) for p in index.points],
    }
    return json.dumps(payload, indent=2)


def index_from_json(text: str) -> UnweightedAfnIndex:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerializationError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise SerializationError("top-level JSON value must be an object")
    if payload.get("kind") != KERNEL_INDEX_KIND:
        raise SerializationError(f"unexpected kind {payload.get('kind')!r}")
    if payload.get("version") != FORMAT_VERSION:
        raise SerializationError(f"unsupported version {payload.get('version')!r}")
    pts = as_point_array(payload["points"])
    if pts.shape[1] != payload["dimension"]:
        raise SerializationError("dimension field disagrees with point data")
    eps = _check_epsilon(payload["epsilon"])
    idx = np.asarray(payload["kernel_indices"], dtype=np.intp)
    if idx.size == 0 or idx.min() < 0 or idx.max() >= pts.shape[0]:
        raise SerializationError("kernel indices out of range")
    kernel = EpsilonKernel(pts, idx, eps)
    return UnweightedAfnIndex(kernel, eps)
