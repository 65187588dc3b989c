import numpy as np
import pytest
from helpers import T6, X6, Y6, random_walk

from trajsimp import BadRate, Tolerance, Trajectory, build_tube, di, mci, min_link_path, sync_distance, vi
from trajsimp.core import lerp, project
from trajsimp.weak import SamplingRate, vi_dimension

XY = Trajectory(T6, np.column_stack([X6, Y6]))


def cases(seed, count, nmax=60):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        tr = random_walk(rng, int(rng.integers(2, nmax)), int(rng.integers(1, 4)))
        yield tr, Tolerance.for_data(float(rng.uniform(0.1, 2)), tr)


@pytest.mark.parametrize("algo", [di, mci, vi])
def test_straight_line_two_points(algo):
    t = np.arange(30.0)
    tr = Trajectory(t, np.column_stack([2 * t, -t, 0.5 * t]))
    assert algo(tr, Tolerance(0.01)).n == 2


def test_running_example_di_five_mci_four():
    tol = Tolerance(1.0)
    assert di(XY, tol).n == 5
    assert mci(XY, tol).n == 4


@pytest.mark.parametrize("algo", [di, mci, vi])
def test_error_bound_and_endpoints(algo):
    for tr, tol in cases(0, 80):
        out = algo(tr, tol)
        assert sync_distance(out, tr) <= tol.epsilon + tol.eta
        assert out.t[0] == tr.t[0] and out.t[-1] == tr.t[-1]
        assert np.all(np.abs(out.xs[[0, -1]] - tr.xs[[0, -1]]) <= tol.epsilon + tol.eta)


def test_di_size_between_max_and_sum_of_dimensions():
    for tr, tol in cases(1, 60):
        if tr.n < 3:
            continue
        sizes = [len(min_link_path(build_tube(project(tr, d + 1), tol)).path) for d in range(tr.dims)]
        n = di(tr, tol).n
        assert max(sizes) <= n <= sum(sizes)


def interpolated_prefix_ok(out):
    """Each coordinate flagged interpolated equals the interpolation of its carriers."""
    mask = out.interpolated
    for i, row in enumerate(mask):
        k = int(np.argmin(np.append(row, False)))
        if row[k:].any():
            return False
    for d in range(out.dims):
        own = ~mask[:, d]
        want = lerp(out.t[own], out.xs[own, d], out.t[~own])
        if not np.array_equal(want, out.xs[~own, d]):
            return False
    return True


@pytest.mark.parametrize("algo", [mci, vi])
def test_interpolated_prefix_property(algo):
    for tr, tol in cases(2, 60):
        assert interpolated_prefix_ok(algo(tr, tol))


def test_timestamp_nesting():
    # timestamps chosen for the first dimension survive in the final output
    for tr, tol in cases(3, 40):
        if tr.n < 3 or tr.dims < 2:
            continue
        first = min_link_path(build_tube(project(tr, 1), tol)).path.t
        out = mci(tr, tol)
        assert np.isin(first, out.t).all()


def candidate_graph_oracle(proj, cuts, tol, r):
    """Shortest path over (chord, candidate) nodes with materialized link paths as edge weights."""
    eps = tol.epsilon
    offs = [(2.0 * q / r - 1.0) * eps for q in range(r + 1)]
    dist = {q: 1 for q in range(r + 1)}
    for a, b in zip(cuts[:-1], cuts[1:]):
        tb = build_tube(proj.slice(a, b), tol)
        ca = [proj.at(a) + o for o in offs]
        cb = [proj.at(b) + o for o in offs]
        dist = {
            q: min(dist[p] + min_link_path(tb, float(ca[p]), float(cb[q])).links for p in range(r + 1))
            for q in range(r + 1)
        }
    return min(dist.values())


def test_vi_table_matches_candidate_graph():
    for tr, tol in cases(4, 40, nmax=30):
        if tr.n < 3 or tr.dims < 2:
            continue
        cuts = min_link_path(build_tube(project(tr, 1), tol)).path.t
        for r in (1, 2, 4):
            path, count = vi_dimension(project(tr, 2), cuts, tol, r)
            assert count == candidate_graph_oracle(project(tr, 2), cuts, tol, r)
            assert len(path) == count


def test_vi_higher_rate_usually_better():
    rng = np.random.default_rng(5)
    wins = total = 0
    for _ in range(20):
        tr = random_walk(rng, 300, 2)
        tol = Tolerance.for_data(1.5, tr)
        wins += vi(tr, tol, 10).n <= vi(tr, tol, 2).n
        total += 1
    assert wins >= 0.95 * total


def test_bad_rate():
    with pytest.raises(BadRate):
        vi(XY, Tolerance(1.0), 0)
    with pytest.raises(BadRate):
        SamplingRate(0)
    assert vi(XY, Tolerance(1.0), SamplingRate(4)).n >= 2


def test_deterministic():
    for tr, tol in cases(6, 10):
        assert vi(tr, tol, 4).bit_identical(vi(tr, tol, 4))
        assert mci(tr, tol).bit_identical(mci(tr, tol))


def test_dimension_order_knob():
    rng = np.random.default_rng(7)
    tr = random_walk(rng, 100, 3)
    tol = Tolerance.for_data(1.0, tr)
    out = mci(tr, tol, order=[2, 0, 1])
    assert sync_distance(out, tr) <= tol.epsilon + tol.eta
    # the last processed dimension (y) is stored by every point
    assert not out.interpolated[:, 1].any()
    assert out.interpolated[:, 2].any()


def test_two_point_input_unchanged():
    tr = Trajectory([0.0, 1.0], [[1.0, 2.0], [3.0, 4.0]])
    for algo in (di, mci, vi):
        assert algo(tr, Tolerance(0.5)) == tr
