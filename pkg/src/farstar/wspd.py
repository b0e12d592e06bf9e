"""Well-separated pair decompositions via a fair-split tree.

Two point groups are ``s``-well-separated when they fit in balls of radius
``r`` whose centers are at least ``s * r`` apart.  The decomposition covers
every ordered pair of distinct points by exactly one group pair, so one
representative pair per group pair approximates all interpoint distances
within a factor depending on ``s``.  Used here as a subquadratic source of
candidate pairs for dilation estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyPointSetError, InvalidParameterError


@dataclass
class _SplitNode:
    indices: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    left: "_SplitNode | None" = None
    right: "_SplitNode | None" = None
    # cached bounding-ball data
    center: np.ndarray = field(init=False)
    radius: float = field(init=False)

    def __post_init__(self) -> None:
        self.center = (self.lo + self.hi) / 2.0
        self.radius = float(np.linalg.norm(self.hi - self.lo)) / 2.0

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _build_split_tree(points: np.ndarray, indices: np.ndarray) -> _SplitNode:
    sub = points[indices]
    node = _SplitNode(indices, sub.min(axis=0), sub.max(axis=0))
    if indices.shape[0] == 1:
        return node
    extent = node.hi - node.lo
    axis = int(np.argmax(extent))
    mid = (node.lo[axis] + node.hi[axis]) / 2.0
    mask = sub[:, axis] <= mid
    # a degenerate cut (all points on one side) falls back to a median split
    if mask.all() or not mask.any():
        order = np.argsort(sub[:, axis], kind="stable")
        half = indices.shape[0] // 2
        mask = np.zeros(indices.shape[0], dtype=bool)
        mask[order[:half]] = True
    node.left = _build_split_tree(points, indices[mask])
    node.right = _build_split_tree(points, indices[~mask])
    return node


def _separated(a: _SplitNode, b: _SplitNode, s: float) -> bool:
    r = max(a.radius, b.radius)
    return float(np.linalg.norm(a.center - b.center)) >= (s + 2.0) * r


def well_separated_pairs(points, separation: float) -> list[tuple[np.ndarray, np.ndarray]]:
    """All group pairs of an ``s``-WSPD, as arrays of point indices.

    Every unordered pair of distinct points appears in exactly one group
    pair.  ``separation`` must be positive; larger values give tighter
    distance approximation and more pairs.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise EmptyPointSetError("well_separated_pairs needs a nonempty 2-D array")
    if separation <= 0:
        raise InvalidParameterError(f"separation must be positive, got {separation!r}")
    if pts.shape[0] == 1:
        return []
    root = _build_split_tree(pts, np.arange(pts.shape[0]))
    out: list[tuple[np.ndarray, np.ndarray]] = []
    # seed one (left, right) pair per internal node, then refine: split
    # whichever side has the larger bounding ball until separated
    stack: list[tuple[_SplitNode, _SplitNode]] = []
    walk = [root]
    while walk:
        node = walk.pop()
        if node.is_leaf:
            continue
        stack.append((node.left, node.right))
        walk.append(node.left)
        walk.append(node.right)
    while stack:
        a, b = stack.pop()
        if _separated(a, b, separation):
            out.append((a.indices, b.indices))
            continue
        if a.radius < b.radius:
            a, b = b, a
        stack.append((a.left, b))
        stack.append((a.right, b))
    return out


def representative_pairs(points, separation: float) -> np.ndarray:
    """One (i, j) index pair per WSPD group pair, shape (m, 2).

    Representatives are the lowest-index member of each group, which keeps
    the output deterministic for a fixed input ordering.
    """
    pairs = well_separated_pairs(points, separation)
    if not pairs:
        return np.empty((0, 2), dtype=np.intp)
    reps = np.array(
        [(int(a.min()), int(b.min())) for a, b in pairs], dtype=np.intp
    )
    reps.sort(axis=1)
    order = np.lexsort((reps[:, 1], reps[:, 0]))
    return np.unique(reps[order], axis=0)
