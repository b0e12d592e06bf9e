"""Kernel construction and unweighted farthest queries against brute force."""

import numpy as np
import pytest

from farstar.errors import InvalidParameterError, SerializationError
from farstar.geometry import directional_widths, sample_directions
from farstar.kernel import (
    EpsilonKernel,
    UnweightedAfnIndex,
    afn_query,
    brute_force_farthest,
    build_kernel,
    direction_count,
    direction_grid,
    index_from_json,
    index_to_json,
)


def shapes_2d(rng, n):
    """A few qualitatively different planar clouds."""
    thin = rng.random((n, 2)) * [10.0, 0.01]
    ang = rng.uniform(0, 2 * np.pi, n)
    ring = np.stack([np.cos(ang), np.sin(ang)], axis=1) * rng.uniform(0.9, 1.0, (n, 1))
    square = rng.random((n, 2))
    collinear = np.linspace(0.0, 1.0, n)[:, None] * [3.0, 4.0]
    rot = np.array([[np.cos(0.7), -np.sin(0.7)], [np.sin(0.7), np.cos(0.7)]])
    return {
        "square": square,
        "thin-rotated": thin @ rot.T,
        "ring": ring,
        "collinear": collinear,
    }


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_direction_grid_is_unit_and_counted(dim):
    grid = direction_grid(dim, 0.2)
    assert grid.shape[0] == direction_count(dim, 0.2)
    np.testing.assert_allclose(np.linalg.norm(grid, axis=1), 1.0, atol=1e-12)


def test_direction_grid_2d_antipodal():
    grid = direction_grid(2, 0.1)
    assert grid.shape[0] % 2 == 0
    # the grid contains the negation of each direction
    half = grid.shape[0] // 2
    np.testing.assert_allclose(grid[half:], -grid[:half], atol=1e-12)


def test_direction_grid_1d():
    np.testing.assert_array_equal(direction_grid(1, 0.3), [[1.0], [-1.0]])


def test_direction_count_grows_as_epsilon_shrinks():
    for dim in (2, 3):
        counts = [direction_count(dim, e) for e in (0.4, 0.1, 0.025)]
        assert counts == sorted(counts)


def test_epsilon_validation():
    with pytest.raises(InvalidParameterError):
        build_kernel(np.zeros((3, 2)), 0.0)
    with pytest.raises(InvalidParameterError):
        build_kernel(np.zeros((3, 2)), 1.0)


def test_small_sets_are_kept_whole():
    pts = np.random.default_rng(1).random((20, 2))
    k = build_kernel(pts, 0.1)
    assert k.size == 20  # below the direction budget, the kernel is exact


def test_kernel_is_deterministic():
    pts = np.random.default_rng(7).random((5000, 2))
    a = build_kernel(pts, 0.1).indices
    b = build_kernel(pts, 0.1).indices
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("eps", [0.5, 0.2, 0.1])
def test_width_preserved_on_varied_shapes(eps):
    rng = np.random.default_rng(42)
    dirs = sample_directions(2, 1000, rng)
    for name, pts in shapes_2d(rng, 4000).items():
        k = build_kernel(pts, eps)
        wp = directional_widths(pts, dirs)
        wk = directional_widths(k.kernel_points, dirs)
        assert (wk <= wp + 1e-9).all(), name
        alive = wp > 0
        assert (wk[alive] >= (1 - eps) * wp[alive]).all(), name


@pytest.mark.parametrize(
    "dim,n,eps",
    [(3, 3000, 0.3), (4, 15000, 0.5)],  # n above the direction budget
)
def test_width_preserved_higher_dim(dim, n, eps):
    rng = np.random.default_rng(dim)
    pts = rng.random((n, dim)) * (1.0 + np.arange(dim))  # anisotropic box
    k = build_kernel(pts, eps)
    assert k.size < n
    dirs = sample_directions(dim, 1000, rng)
    wp = directional_widths(pts, dirs)
    wk = directional_widths(k.kernel_points, dirs)
    assert (wk >= (1 - eps) * wp).all()
    assert (wk <= wp + 1e-9).all()


def test_collinear_kernel_keeps_extremes():
    t = np.linspace(0.0, 1.0, 2000)[:, None]
    pts = t * [2.0, 1.0] + [5.0, -3.0]
    k = build_kernel(pts, 0.2)
    assert 0 in k.indices and 1999 in k.indices
    # farthest queries on a segment are exact from its endpoints
    for q in ([0.0, 0.0], [10.0, 10.0], [5.5, -2.0]):
        approx = afn_query(UnweightedAfnIndex(k, 0.2), q)
        exact = brute_force_farthest(pts, q)
        assert approx.distance == pytest.approx(exact.distance, rel=1e-12)


def test_coincident_points_are_harmless():
    pts = np.tile([[2.0, -1.0, 0.5]], (50, 1))
    k = build_kernel(pts, 0.5)
    res = afn_query(UnweightedAfnIndex(k, 0.5), [0.0, 0.0, 0.0])
    assert res.distance == pytest.approx(np.sqrt(5.25))


@pytest.mark.parametrize("eps", [0.4, 0.1])
def test_query_guarantee_random(eps):
    rng = np.random.default_rng(99)
    pts = rng.normal(size=(3000, 2)) @ np.array([[3.0, 0.0], [0.0, 0.2]])
    index = UnweightedAfnIndex.build(pts, eps)
    assert index.kernel.size < 3000
    for _ in range(200):
        q = rng.uniform(-5, 5, 2)
        approx = index.query(q)
        exact = brute_force_farthest(pts, q)
        assert approx.distance <= exact.distance + 1e-9
        assert approx.distance >= (1 - eps) * exact.distance


def test_tie_breaks_to_lowest_index():
    pts = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    res = afn_query(UnweightedAfnIndex.build(pts, 0.5), [-1.0, 0.0])
    assert res.index == 0


def test_size_trend_quarter_epsilon():
    pts = np.random.default_rng(3).random((20000, 2))
    for eps in (0.4, 0.1):
        big = build_kernel(pts, eps).size
        small = build_kernel(pts, eps / 4).size
        assert small <= 4 * big


def test_json_round_trip():
    pts = np.random.default_rng(8).random((500, 3))
    index = UnweightedAfnIndex.build(pts, 0.2)
    clone = index_from_json(index_to_json(index))
    np.testing.assert_array_equal(clone.kernel.indices, index.kernel.indices)
    q = [0.5, -2.0, 0.1]
    a, b = clone.query(q), index.query(q)
    assert a.index == b.index and a.distance == b.distance
    # serialization is stable byte-for-byte
    assert index_to_json(clone) == index_to_json(index)


def test_json_rejects_corruption():
    index = UnweightedAfnIndex.build(np.random.default_rng(2).random((30, 2)), 0.3)
    text = index_to_json(index)
    with pytest.raises(SerializationError):
        index_from_json(text.replace("afn_kernel_index", "mystery"))
    with pytest.raises(SerializationError):
        index_from_json(text.replace('"version": 1', '"version": 99'))
    with pytest.raises(SerializationError):
        index_from_json(text.replace('"dimension": 2', '"dimension": 7'))
    with pytest.raises(SerializationError):
        index_from_json("{not json")
    bad = text.replace('"kernel_indices": [', '"kernel_indices": [4444, ')
    with pytest.raises(SerializationError):
        index_from_json(bad)


def test_kernel_points_view():
    pts = np.arange(12.0).reshape(6, 2)
    k = EpsilonKernel(pts, np.array([0, 5]), 0.5)
    np.testing.assert_array_equal(k.kernel_points, [[0.0, 1.0], [10.0, 11.0]])
    assert k.size == 2
