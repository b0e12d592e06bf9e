import numpy as np
import pytest

from farstar.errors import (
    DimensionMismatchError,
    EmptyPointSetError,
    InvalidParameterError,
    InvalidWeightError,
)
from farstar.geometry import (
    EUCLIDEAN,
    WeightedPointSet,
    as_point,
    as_point_array,
    directional_width,
    directional_widths,
    distance,
    normalize_weights,
    sample_directions,
    unit_direction,
    weighted_distance,
)


def test_as_point_rejects_bad_shapes():
    with pytest.raises(InvalidParameterError):
        as_point([[1.0, 2.0]])
    with pytest.raises(InvalidParameterError):
        as_point([1.0, np.nan])
    with pytest.raises(DimensionMismatchError):
        as_point([1.0, 2.0], dim=3)


def test_as_point_array_rejects_empty_and_ragged():
    with pytest.raises(EmptyPointSetError):
        as_point_array(np.empty((0, 2)))
    with pytest.raises(InvalidParameterError):
        as_point_array(np.empty((3, 0)))
    with pytest.raises(InvalidParameterError):
        as_point_array(np.full((2, 2), np.inf))
    with pytest.raises(DimensionMismatchError):
        as_point_array(np.ones((4, 3)), dim=2)


def test_single_point_promoted_to_row():
    arr = as_point_array([1.0, 2.0, 3.0])
    assert arr.shape == (1, 3)


def test_distance_basics():
    assert distance([0.0, 0.0], [3.0, 4.0]) == 5.0
    assert distance([1.0], [1.0]) == 0.0
    with pytest.raises(DimensionMismatchError):
        distance([0.0, 0.0], [1.0, 2.0, 3.0])


def test_euclidean_vectorized_matches_scalar():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(40, 3))
    q = rng.normal(size=3)
    batch = EUCLIDEAN.distances(pts, q)
    singles = np.array([EUCLIDEAN.distance(p, q) for p in pts])
    np.testing.assert_allclose(batch, singles, rtol=1e-14)


def test_weighted_distance_scales_linearly():
    assert weighted_distance([0.0, 0.0], [0.0, 2.0], 0.25) == pytest.approx(0.5)
    with pytest.raises(InvalidWeightError):
        weighted_distance([0.0], [1.0], 0.0)


def test_normalize_weights_unit_max_and_first_argmax():
    scaled, p1 = normalize_weights([2.0, 8.0, 8.0, 1.0])
    assert p1 == 1
    assert scaled[p1] == 1.0
    np.testing.assert_allclose(scaled, [0.25, 1.0, 1.0, 0.125])


def test_normalize_weights_rejects_nonpositive_and_underflow():
    with pytest.raises(InvalidWeightError):
        normalize_weights([1.0, 0.0])
    with pytest.raises(InvalidWeightError):
        normalize_weights([1.0, -2.0])
    with pytest.raises(InvalidWeightError):
        normalize_weights([np.nan, 1.0])
    # ratio below the float64 range collapses to zero after scaling
    with pytest.raises(InvalidWeightError):
        normalize_weights([1e300, 1e-300])


def test_unit_direction():
    np.testing.assert_allclose(unit_direction([3.0, 4.0]), [0.6, 0.8])
    with pytest.raises(InvalidParameterError):
        unit_direction([0.0, 0.0])


def test_directional_width_axis_aligned_box():
    # a 2x3 rectangle: width 2 along x, 3 along y
    pts = np.array([[0.0, 0.0], [2.0, 0.0], [0.0, 3.0], [2.0, 3.0]])
    assert directional_width(pts, [1.0, 0.0]) == pytest.approx(2.0)
    assert directional_width(pts, [0.0, 1.0]) == pytest.approx(3.0)
    d = unit_direction([2.0, 3.0])
    # along the diagonal the extent is the projection of the diagonal itself
    assert directional_width(pts, d) == pytest.approx(np.sqrt(13.0))


def test_directional_width_requires_unit_vector():
    pts = np.array([[0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(InvalidParameterError):
        directional_width(pts, [1.0, 1.0])


def test_directional_widths_matches_loop():
    rng = np.random.default_rng(11)
    pts = rng.normal(size=(60, 4))
    dirs = sample_directions(4, 25, rng)
    batch = directional_widths(pts, dirs)
    loop = np.array([directional_width(pts, u) for u in dirs])
    np.testing.assert_allclose(batch, loop, rtol=1e-12)


def test_sample_directions_are_unit():
    rng = np.random.default_rng(0)
    dirs = sample_directions(3, 500, rng)
    np.testing.assert_allclose(np.linalg.norm(dirs, axis=1), 1.0, atol=1e-12)


class TestWeightedPointSet:
    def test_from_raw_normalizes(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        ps = WeightedPointSet.from_raw(pts, [5.0, 20.0, 10.0])
        assert ps.p1_index == 1
        np.testing.assert_allclose(ps.weights, [0.25, 1.0, 0.5])
        np.testing.assert_array_equal(ps.p1, [1.0, 0.0])
        assert ps.n == 3 and ps.dimension == 2

    def test_none_weights_are_all_ones(self):
        ps = WeightedPointSet.from_raw(np.zeros((4, 2)))
        assert ps.p1_index == 0
        assert (ps.weights == 1.0).all()

    def test_arrays_are_frozen(self):
        ps = WeightedPointSet.from_raw(np.zeros((2, 2)), [1.0, 1.0])
        with pytest.raises(ValueError):
            ps.points[0, 0] = 5.0
        with pytest.raises(ValueError):
            ps.weights[0] = 0.5

    def test_rejects_unnormalized_weights(self):
        pts = np.zeros((2, 2))
        with pytest.raises(InvalidWeightError):
            WeightedPointSet(pts, np.array([0.5, 0.2]), 0)  # no weight-1 point
        with pytest.raises(InvalidWeightError):
            WeightedPointSet(pts, np.array([1.0, 2.0]), 1)  # above 1
        with pytest.raises(InvalidWeightError):
            WeightedPointSet(pts, np.array([1.0, 1.0]), 1)  # p1 not first
        with pytest.raises(InvalidWeightError):
            WeightedPointSet(pts, np.array([1.0]), 0)  # length mismatch

    def test_weight_count_must_match(self):
        with pytest.raises(InvalidWeightError):
            WeightedPointSet.from_raw(np.zeros((3, 2)), [1.0, 1.0])
