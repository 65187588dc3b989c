"""Shared fixtures, input generators and slow reference implementations."""

import itertools

import numpy as np

from trajsimp import Trajectory, gen_wiener
from trajsimp.core import lerp
from trajsimp.strong import segment_deviation

T6 = np.arange(1.0, 7.0)
X6 = np.array([3.5, 2.0, 4.5, 0.0, 1.0, 4.5])
Y6 = np.array([0.0, 3.0, 2.6, 2.2, 1.8, 1.4])


def random_walk(rng, n, m, step=1.0):
    t = np.cumsum(rng.uniform(0.1, 1.0, n))
    return Trajectory(t, np.cumsum(rng.normal(0, step, (n, m)), axis=0))


def step_spike(rng, n, m):
    """Piecewise-constant levels with isolated spikes."""
    t = np.cumsum(rng.uniform(0.05, 2.0, n))
    levels = np.repeat(rng.normal(0, 5, (n // 5 + 1, m)), 5, axis=0)[:n]
    spikes = rng.random(n) < 0.1
    levels[spikes] += rng.choice([-20.0, 20.0], size=(spikes.sum(), m))
    return Trajectory(t, levels)


def fuzz_inputs(seed, count, nmax=500):
    """Mix of Wiener paths, random-step walks and step/spike sequences."""
    rng = np.random.default_rng(seed)
    for k in range(count):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(2, nmax + 1))
        kind = k % 3
        if kind == 0:
            tr = gen_wiener(m, n, float(rng.uniform(0.1, 2.0)), int(rng.integers(1 << 30)))
        elif kind == 1:
            tr = random_walk(rng, n, m)
        else:
            tr = step_spike(rng, n, m)
        spread = float(np.ptp(tr.xs)) or 1.0
        eps = spread * float(10 ** rng.uniform(-3, 0))
        yield tr, eps


def brute_force_opt(traj, eps):
    """Fewest points of any endpoint-preserving subsequence within eps."""
    n = traj.n
    for size in range(2, n + 1):
        for mid in itertools.combinations(range(1, n - 1), size - 2):
            idx = (0, *mid, n - 1)
            if all(segment_deviation(traj, a, b)[0] <= eps for a, b in zip(idx, idx[1:])):
                return size
    return n


def grid_link_oracle(t, x, eps, grid=1000, sub=1, slack=1e-9):
    """Link count by BFS over grid points on vertical chords.

    Chords sit at every sample time plus ``sub`` evenly spaced times inside
    each segment.  From each reached grid point one sweep over the following
    samples intersects the slope intervals that keep a segment inside the
    tube; the points it can see on a later chord form an interval.  Because
    vertices are restricted to the grid the result is an upper bound on the
    true link count.
    """
    t = np.asarray(t, float)
    x = np.asarray(x, float)
    times = [t[0]]
    for a, b in zip(t[:-1], t[1:]):
        times += [a + (b - a) * k / (sub + 1) for k in range(1, sub + 1)] + [b]
    times = np.array(times)
    cen = lerp(t, x, times)
    N = len(times)
    frac = np.linspace(0.0, 1.0, grid)
    pts = cen[:, None] - eps + 2 * eps * frac[None, :]
    reached = np.zeros((N, grid), bool)
    reached[0] = True
    frontier = reached.copy()
    links = 0
    while True:
        links += 1
        new = np.zeros_like(reached)
        for i in range(N - 1):
            src = pts[i][frontier[i]]
            if src.size == 0:
                continue
            lo = np.full(src.shape, -np.inf)
            hi = np.full(src.shape, np.inf)
            for j in range(i + 1, N):
                dt = times[j] - times[i]
                tlo = (pts[j][0] - src) / dt
                thi = (pts[j][-1] - src) / dt
                a = np.maximum(lo, tlo) * dt + src
                b = np.minimum(hi, thi) * dt + src
                ok = a <= b + slack
                if ok.any():
                    step = pts[j][1] - pts[j][0] if grid > 1 else 1.0
                    ia = np.clip(np.ceil((a[ok] - slack - pts[j][0]) / step), 0, grid)
                    ib = np.clip(np.floor((b[ok] + slack - pts[j][0]) / step) + 1, 0, grid)
                    diff = np.zeros(grid + 1)
                    np.add.at(diff, ia.astype(int), 1)
                    np.add.at(diff, ib.astype(int), -1)
                    new[j] |= np.cumsum(diff[:-1]) > 0
                if times[j] in t:
                    # sample time: the tube boundary constrains later segments
                    lo = np.maximum(lo, (cen[j] - eps - slack - src) / dt)
                    hi = np.minimum(hi, (cen[j] + eps + slack - src) / dt)
                    if not np.any(lo <= hi):
                        break
        if new[-1].any():
            return links
        frontier = new & ~reached
        reached |= new
        if not frontier.any():
            raise RuntimeError("grid oracle found no path")


def naive_sync_distance(a, b, samples=2000):
    """Dense-sampling L-inf distance over the common time domain."""
    ts = np.union1d(np.linspace(a.t[0], a.t[-1], samples), np.union1d(a.t, b.t))
    return float(np.max(np.abs(lerp(a.t, a.xs, ts) - lerp(b.t, b.xs, ts))))
