"""Weighted farthest-neighbor reduction: buckets, staircase, and the guarantee."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from farstar.errors import InvalidParameterError, InvalidWeightError, SerializationError
from farstar.geometry import Metric, WeightedPointSet
from farstar.kernel import UnweightedAfnIndex
from farstar.weighted import (
    brute_force_weighted,
    bucket_bounds,
    bucket_index,
    build_weighted_index,
    index_from_json,
    index_to_json,
    max_bucket_count,
    weighted_query,
)


def random_instance(rng, n, dim, spread=3.0):
    pts = rng.normal(size=(n, dim)) * spread
    w = np.exp(rng.uniform(np.log(1e-3), 0.0, n))
    return WeightedPointSet.from_raw(pts, w)


# ---------------------------------------------------------------- buckets

def test_bucket_zero_holds_the_threshold_weight():
    eps = 0.2
    assert bucket_index(eps / 2, eps) == 0


def test_bucket_boundaries_are_half_open():
    eps = 0.2
    for i in (0, 3, 17):
        lo, hi = bucket_bounds(i, eps)
        assert bucket_index(hi, eps) == i
        if lo >= eps / 2:  # lo itself belongs to the bucket below
            assert bucket_index(lo, eps) == i - 1
        assert bucket_index(np.nextafter(hi, 2.0), eps) == i + 1


def test_bucket_rejects_out_of_range():
    with pytest.raises(InvalidWeightError):
        bucket_index(0.01, 0.2)  # below eps/2
    with pytest.raises(InvalidWeightError):
        bucket_index(1.5, 0.2)
    with pytest.raises(InvalidParameterError):
        bucket_index(0.5, 0.0)


@settings(max_examples=300, deadline=None)
@given(
    w=st.floats(min_value=0.025, max_value=1.0, allow_nan=False),
    eps=st.sampled_from([0.05, 0.1, 0.2, 0.5]),
)
def test_bucket_membership_property(w, eps):
    if w < eps / 2:
        return
    i = bucket_index(w, eps)
    lo, hi = bucket_bounds(i, eps)
    assert lo < w <= hi
    assert i >= 0


@pytest.mark.parametrize("eps", [0.5, 0.2, 0.1, 0.05])
def test_nonempty_buckets_within_bound(eps):
    rng = np.random.default_rng(17)
    ps = random_instance(rng, 1500, 2)
    index = build_weighted_index(ps, eps)
    assert len(index.buckets) <= max_bucket_count(eps)
    cap = (1 + eps / 2) * (1 + 1e-12)
    for m in index.buckets.members:
        bw = ps.weights[m]
        assert bw.max() <= bw.min() * cap
    for ix in index.buckets.indexes:
        assert ix.epsilon == eps / 2  # per-bucket kernels run at half error


# -------------------------------------------------------------- structure

def test_split_at_half_epsilon():
    eps = 0.2
    w = np.array([1.0, 0.1001, 0.1, 0.0999, 0.001])
    pts = np.arange(10.0).reshape(5, 2)
    index = build_weighted_index(WeightedPointSet(pts, w, 0), eps)
    heavy = np.sort(np.concatenate(index.buckets.members))
    np.testing.assert_array_equal(heavy, [0, 1, 2])  # w == eps/2 counts as heavy
    np.testing.assert_array_equal(np.sort(index.pared_s2.indices), [3, 4])


def test_staircase_shape_and_dominance():
    rng = np.random.default_rng(4)
    ps = random_instance(rng, 800, 2)
    index = build_weighted_index(ps, 0.1)
    p = index.pared_s2
    assert len(p) >= 1
    assert (np.diff(p.dists) >= 0).all()
    assert (np.diff(p.weighted_dists) < 0).all()
    # every light point is dominated by some kept point at least as far out
    d_p1 = np.linalg.norm(ps.points - ps.p1, axis=1)
    heavy = np.zeros(ps.n, dtype=bool)
    heavy[np.concatenate(index.buckets.members)] = True
    for x in np.flatnonzero(~heavy):
        ok = (p.dists >= d_p1[x] - 1e-12) & (
            p.weighted_dists >= ps.weights[x] * d_p1[x] - 1e-12
        )
        assert ok.any()


def test_unit_weights_have_empty_staircase():
    ps = WeightedPointSet.from_raw(np.random.default_rng(0).random((100, 2)))
    index = build_weighted_index(ps, 0.3)
    assert len(index.pared_s2) == 0
    assert len(index.buckets) == 1  # every weight is exactly 1


def test_build_rejects_raw_arrays():
    with pytest.raises(InvalidWeightError):
        build_weighted_index(np.zeros((4, 2)), 0.1)


# ---------------------------------------------------------------- queries

@pytest.mark.parametrize("dim,eps", [(2, 0.1), (2, 0.5), (3, 0.2), (4, 0.1)])
def test_guarantee_against_oracle(dim, eps):
    rng = np.random.default_rng(dim * 100 + int(eps * 100))
    ps = random_instance(rng, 1200, dim)
    index = build_weighted_index(ps, eps)
    for _ in range(150):
        q = rng.normal(size=dim) * 4.0
        res = index.query(q)
        oracle = brute_force_weighted(ps, q)
        assert res.weighted_distance <= oracle.weighted_distance * (1 + 1e-12)
        assert res.weighted_distance >= (1 - eps) * oracle.weighted_distance
        # reported value is the answer point's true weighted distance
        d = np.linalg.norm(ps.points[res.index] - q)
        assert res.weighted_distance == pytest.approx(ps.weights[res.index] * d)


def test_far_light_outlier_found_via_staircase():
    # One light point far away dominates every heavy point; the staircase
    # candidate is the only way to reach it.
    pts = np.vstack([np.random.default_rng(1).random((50, 2)), [[1e6, 0.0]]])
    w = np.concatenate([np.ones(50), [0.01]])
    ps = WeightedPointSet.from_raw(pts, w)
    index = build_weighted_index(ps, 0.1)
    assert 50 in index.pared_s2.indices
    res = index.query([0.5, 0.5])
    assert res.index == 50
    oracle = brute_force_weighted(ps, [0.5, 0.5])
    assert res.weighted_distance >= 0.9 * oracle.weighted_distance


def test_query_at_p1_location():
    rng = np.random.default_rng(23)
    ps = random_instance(rng, 300, 2)
    index = build_weighted_index(ps, 0.2)
    res = index.query(ps.p1)
    oracle = brute_force_weighted(ps, ps.p1)
    assert res.weighted_distance >= 0.8 * oracle.weighted_distance


def test_single_point_set():
    ps = WeightedPointSet.from_raw([[1.0, 2.0]])
    index = build_weighted_index(ps, 0.1)
    res = index.query([4.0, 6.0])
    assert res.index == 0
    assert res.weighted_distance == pytest.approx(5.0)


def test_coincident_points_prefer_heaviest():
    pts = np.zeros((5, 2))
    w = np.array([0.3, 1.0, 0.3, 0.3, 0.3])
    ps = WeightedPointSet(pts, w, 1)
    index = build_weighted_index(ps, 0.2)
    res = index.query([1.0, 1.0])
    assert res.weighted_distance == pytest.approx(np.sqrt(2.0))


class _TaxicabMetric(Metric):
    def distance(self, a, b):
        return float(np.abs(a - b).sum())

    def distances(self, points, q):
        return np.abs(points - q).sum(axis=1)


def test_generic_metric_path_is_exact_per_bucket():
    # Non-Euclidean metrics fall back to exact per-bucket scans, so only
    # the bucket rounding (factor 1 + eps/2) and staircase cuts remain.
    rng = np.random.default_rng(9)
    ps = random_instance(rng, 400, 2)
    eps = 0.2
    index = build_weighted_index(ps, eps, metric=_TaxicabMetric())
    assert index._fast is None
    metric = _TaxicabMetric()
    for _ in range(50):
        q = rng.normal(size=2) * 3
        res = weighted_query(index, q)
        vals = ps.weights * metric.distances(ps.points, q)
        assert res.weighted_distance >= (1 - eps) * vals.max()
        assert res.weighted_distance <= vals.max() * (1 + 1e-12)


def test_fast_and_factory_paths_agree():
    rng = np.random.default_rng(31)
    ps = random_instance(rng, 600, 2)
    fast = build_weighted_index(ps, 0.1)
    slow = build_weighted_index(
        ps, 0.1, unweighted_factory=UnweightedAfnIndex.build
    )
    assert fast._fast is not None and slow._fast is None
    for _ in range(60):
        q = rng.normal(size=2) * 3
        a, b = fast.query(q), slow.query(q)
        assert a.index == b.index
        assert a.weighted_distance == pytest.approx(b.weighted_distance, rel=1e-12)


# ---------------------------------------------------------- serialization

def test_round_trip_preserves_answers():
    rng = np.random.default_rng(77)
    ps = random_instance(rng, 500, 3)
    index = build_weighted_index(ps, 0.2)
    clone = index_from_json(index_to_json(index))
    for _ in range(40):
        q = rng.normal(size=3) * 2
        a, b = index.query(q), clone.query(q)
        assert a.index == b.index and a.weighted_distance == b.weighted_distance
    assert index_to_json(clone) == index_to_json(index)


def test_round_trip_is_stable_bytes():
    ps = WeightedPointSet.from_raw(
        np.random.default_rng(6).random((80, 2)), None
    )
    index = build_weighted_index(ps, 0.4)
    assert index_to_json(index) == index_to_json(index)


def test_deserialization_rejects_corruption():
    ps = random_instance(np.random.default_rng(2), 60, 2)
    text = index_to_json(build_weighted_index(ps, 0.2))
    with pytest.raises(SerializationError):
        index_from_json(text.replace("weighted_afn_index", "other"))
    with pytest.raises(SerializationError):
        index_from_json(text.replace('"version": 1', '"version": 3'))
    with pytest.raises(SerializationError):
        index_from_json("[]")
    # kernel member that is not part of the bucket
    with pytest.raises(SerializationError):
        index_from_json(text.replace('"kernel": [', '"kernel": [999999, '))
