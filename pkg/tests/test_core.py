import math

import numpy as np
import pytest
from helpers import naive_sync_distance, random_walk

from trajsimp import (
    BadDimension,
    BadMetric,
    DomainMismatch,
    OutOfDomain,
    Projection1D,
    Trajectory,
    TrajectoryError,
    combine_interpolation,
    interpolate_at,
    max_deviation,
    project,
    sync_distance,
)
from trajsimp.core import Tolerance, lerp, zip_projections


def test_interpolate_midpoint():
    tr = Trajectory([0.0, 2.0], [[0.0, 0.0], [2.0, 4.0]])
    assert interpolate_at(tr, 1.0).tolist() == [1.0, 2.0]


def test_interpolate_exact_at_samples():
    rng = np.random.default_rng(0)
    tr = random_walk(rng, 50, 3)
    for i in range(tr.n):
        assert interpolate_at(tr, tr.t[i]).tobytes() == tr.xs[i].tobytes()


def test_interpolate_out_of_domain():
    tr = Trajectory([0.0, 1.0], [[0.0], [1.0]])
    with pytest.raises(OutOfDomain):
        interpolate_at(tr, 1.5)
    with pytest.raises(OutOfDomain):
        interpolate_at(tr, -0.1)


def test_lerp_uses_segment_formula():
    ts = np.array([1.0, 4.0])
    xs = np.array([2.0, 11.0])
    t = 2.5
    assert lerp(ts, xs, t) == 2.0 + (11.0 - 2.0) / (4.0 - 1.0) * (t - 1.0)


@pytest.mark.parametrize(
    "t, xs",
    [
        ([0.0, 0.0], [[1.0], [2.0]]),
        ([1.0, 0.0], [[1.0], [2.0]]),
        ([0.0, 1.0], [[1.0], [math.nan]]),
        ([0.0, 1.0, 2.0], [[1.0], [2.0]]),
    ],
)
def test_trajectory_rejects_bad_input(t, xs):
    with pytest.raises(TrajectoryError):
        Trajectory(t, xs)


def test_trajectory_arrays_read_only():
    tr = Trajectory([0.0, 1.0], [[0.0], [1.0]])
    with pytest.raises(ValueError):
        tr.xs[0, 0] = 5.0


def test_from_points():
    tr = Trajectory.from_points([((0.0, 1.0), 0.0), ((2.0, 3.0), 1.0)])
    assert tr.dims == 2 and tr.n == 2
    assert tr.xs[1].tolist() == [2.0, 3.0]


def test_project_and_zip_round_trip():
    rng = np.random.default_rng(1)
    tr = random_walk(rng, 30, 3)
    projs = [project(tr, d) for d in (1, 2, 3)]
    assert zip_projections(projs).bit_identical(tr)
    with pytest.raises(BadDimension):
        project(tr, 4)
    with pytest.raises(BadDimension):
        project(tr, 0)


def test_projection_slice_has_interpolated_ends():
    p = Projection1D([0.0, 1.0, 2.0, 3.0], [0.0, 2.0, 0.0, 2.0])
    s = p.slice(0.5, 2.5)
    assert s.t.tolist() == [0.5, 1.0, 2.0, 2.5]
    assert s.x.tolist() == [1.0, 2.0, 0.0, 1.0]
    with pytest.raises(OutOfDomain):
        p.slice(-1.0, 1.0)


def test_combine_interpolation_union_timestamps():
    base = Trajectory([0.0, 2.0], [[0.0], [2.0]])
    nxt = Projection1D([0.0, 1.0, 2.0], [5.0, 6.0, 5.0])
    out = combine_interpolation(base, nxt)
    assert out.t.tolist() == [0.0, 1.0, 2.0]
    assert out.xs.tolist() == [[0.0, 5.0], [1.0, 6.0], [2.0, 5.0]]


def test_combine_interpolation_domain_mismatch():
    base = Trajectory([0.0, 2.0], [[0.0], [2.0]])
    with pytest.raises(DomainMismatch):
        combine_interpolation(base, Projection1D([0.0, 3.0], [0.0, 1.0]))


def test_sync_distance_of_self_is_zero():
    rng = np.random.default_rng(2)
    tr = random_walk(rng, 40, 2)
    for p in (1, 2, math.inf):
        assert sync_distance(tr, tr, p) == 0.0


def test_sync_distance_at_interior_time():
    a = Trajectory([0.0, 2.0], [[0.0], [0.0]])
    b = Trajectory([0.0, 1.0, 2.0], [[0.0], [3.0], [0.0]])
    d, t = max_deviation(a, b)
    assert (d, t) == (3.0, 1.0)


def test_sync_distance_matches_dense_sampling():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = random_walk(rng, int(rng.integers(2, 20)), 2)
        tb = np.sort(rng.uniform(a.t[0], a.t[-1], int(rng.integers(0, 15))))
        tb = np.unique(np.concatenate([[a.t[0]], tb, [a.t[-1]]]))
        b = Trajectory(tb, rng.normal(size=(len(tb), 2)))
        assert sync_distance(a, b) == pytest.approx(naive_sync_distance(a, b), abs=1e-12)


def test_sync_distance_bad_metric():
    tr = Trajectory([0.0, 1.0], [[0.0], [1.0]])
    with pytest.raises(BadMetric):
        sync_distance(tr, tr, 3)


def test_sync_distance_dimension_mismatch():
    a = Trajectory([0.0, 1.0], [[0.0], [1.0]])
    b = Trajectory([0.0, 1.0], [[0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(DomainMismatch):
        sync_distance(a, b)


def test_tolerance_validation_and_scaling():
    with pytest.raises(ValueError):
        Tolerance(-1.0)
    tr = Trajectory([0.0, 1.0], [[0.0], [1e6]])
    assert Tolerance.for_data(1.0, tr).eta == pytest.approx(1e-3)
    assert Tolerance.for_data(1.0).eta == 1e-9
    small = Trajectory([0.0, 1.0], [[0.0], [0.01]])
    assert Tolerance.for_data(1.0, small).eta == pytest.approx(1e-11)
