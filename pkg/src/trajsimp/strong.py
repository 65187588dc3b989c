"""Strong simplification: output points are a subset of the input points.

All three algorithms use the synchronized L-infinity deviation, so a segment
p_i -> p_j is acceptable when every skipped point p_k satisfies
``|p_i + slope * (t_k - t_i) - p_k| <= eps`` in each dimension.  Per dimension
that is an interval of admissible slopes, and the L-infinity test is the
conjunction of the per-dimension tests.
"""

from __future__ import annotations

import numpy as np

from .core import Trajectory, as_tolerance
from .errors import TrajectoryError

__all__ = ["rdp", "opw", "opt", "SlopeWindow", "opw_naive", "segment_deviation"]


class SlopeWindow:
    """Running intersection of admissible slope intervals from one anchor."""

    __slots__ = ("lo", "hi")

    def __init__(self, dims):
        self.lo = np.full(dims, -np.inf)
        self.hi = np.full(dims, np.inf)

    @property
    def empty(self):
        return bool(np.any(self.lo > self.hi))

    def add(self, dt, dx, eps):
        """Intersect with the interval keeping a point at offset (dt, dx) within eps."""
        np.maximum(self.lo, (dx - eps) / dt, out=self.lo)
        np.minimum(self.hi, (dx + eps) / dt, out=self.hi)

    def admits(self, slope):
        return bool(np.all(slope >= self.lo) and np.all(slope <= self.hi))


def _check(traj):
    if traj.n < 2:
        raise TrajectoryError("simplification needs at least two points")


def _subset(traj, keep):
    keep = np.asarray(keep)
    return Trajectory(traj.t[keep], traj.xs[keep], validate=False)


def segment_deviation(traj, i, j):
    """Largest L-inf synchronized deviation of points i+1..j-1 from chord p_i p_j, and its index."""
    if j - i < 2:
        return 0.0, i
    t, xs = traj.t, traj.xs
    tk = t[i + 1 : j]
    pred = xs[i] + (xs[j] - xs[i]) / (t[j] - t[i]) * (tk - t[i])[:, None]
    dev = np.max(np.abs(pred - xs[i + 1 : j]), axis=1)
    k = int(np.argmax(dev))
    return float(dev[k]), i + 1 + k


def rdp(traj, tol):
    """Douglas-Peucker with synchronized deviation, split at the worst point."""
    _check(traj)
    tol = as_tolerance(tol, traj)
    lim = tol.epsilon + tol.eta
    keep = np.zeros(traj.n, bool)
    keep[0] = keep[-1] = True
    stack = [(0, traj.n - 1)]
    while stack:
        i, j = stack.pop()
        d, k = segment_deviation(traj, i, j)
        if d > lim:
            keep[k] = True
            stack.append((k, j))
            stack.append((i, k))
    return _subset(traj, np.nonzero(keep)[0])


def opw(traj, tol):
    """Greedy open-window scan with slope-interval intersection; linear time."""
    _check(traj)
    tol = as_tolerance(tol, traj)
    eps = tol.epsilon + tol.eta
    t, xs = traj.t, traj.xs
    n = traj.n
    keep = [0]
    a = 0
    win = SlopeWindow(traj.dims)
    j = a + 2
    while j < n:
        k = j - 1
        win.add(t[k] - t[a], xs[k] - xs[a], eps)
        slope = (xs[j] - xs[a]) / (t[j] - t[a])
        if win.empty or not win.admits(slope):
            keep.append(k)
            a = k
            win = SlopeWindow(traj.dims)
            j = a + 2
            continue
        j += 1
    keep.append(n - 1)
    return _subset(traj, keep)


def opw_naive(traj, tol):
    """Same greedy policy as ``opw`` but checks every candidate by direct scan."""
    _check(traj)
    tol = as_tolerance(tol, traj)
    lim = tol.epsilon + tol.eta
    keep = [0]
    a, j = 0, 2
    while j < traj.n:
        if segment_deviation(traj, a, j)[0] > lim:
            keep.append(j - 1)
            a = j - 1
            j = a + 2
        else:
            j += 1
    keep.append(traj.n - 1)
    return _subset(traj, keep)


def _visible_from(t, xs, i, eps, chunk=64):
    """Indices j > i whose segment from p_i stays within eps of every skipped point."""
    n = len(t)
    out = []
    lo = np.full(xs.shape[1], -np.inf)
    hi = np.full(xs.shape[1], np.inf)
    start = i + 1
    while start < n:
        stop = min(n, start + chunk)
        dt = (t[start:stop] - t[i])[:, None]
        dx = xs[start:stop] - xs[i]
        slope = dx / dt
        # window before including point j itself: intersection over i+1..j-1
        clo = np.maximum.accumulate(np.vstack([lo, (dx - eps) / dt]), axis=0)
        chi = np.minimum.accumulate(np.vstack([hi, (dx + eps) / dt]), axis=0)
        ok = np.all((slope >= clo[:-1]) & (slope <= chi[:-1]), axis=1)
        alive = np.all(clo[:-1] <= chi[:-1], axis=1)
        idx = np.arange(start, stop)
        if not alive.all():
            cut = int(np.argmin(alive))
            out.append(idx[:cut][ok[:cut]])
            return np.concatenate(out)
        out.append(idx[ok])
        lo, hi = clo[-1], chi[-1]
        if np.any(lo > hi):
            return np.concatenate(out)
        start = stop
        chunk *= 2
    return np.concatenate(out) if out else np.empty(0, int)


def opt(traj, tol):
    """Fewest-point subset within eps, by shortest path in the visibility DAG.

    Ties go to the lexicographically smallest index sequence.
    """
    _check(traj)
    tol = as_tolerance(tol, traj)
    eps = tol.epsilon + tol.eta
    t, xs = traj.t, traj.xs
    n = traj.n
    d = np.full(n, np.iinfo(np.int64).max // 2, dtype=np.int64)
    d[-1] = 0
    vis = [None] * n
    for i in range(n - 2, -1, -1):
        v = _visible_from(t, xs, i, eps)
        vis[i] = v
        d[i] = 1 + d[v].min()
    keep = [0]
    i = 0
    while i != n - 1:
        v = vis[i]
        i = int(v[np.argmax(d[v] == d[i] - 1)])
        keep.append(i)
    return _subset(traj, keep)
