"""Weak simplification in m dimensions via 1-D minimum-link paths.

``di`` solves every dimension independently and merges the results.  ``mci``
and ``vi`` solve dimension 1 first and then cut every later dimension at the
timestamps already chosen, so each new dimension only adds timestamps.  A point
introduced while handling dimension ``i`` therefore stores coordinates
``i..m`` and its first ``i-1`` coordinates are interpolations, which is what
the compact codec exploits.
"""

from __future__ import annotations

import numpy as np

from .core import Projection1D, Trajectory, as_tolerance, combine_interpolation, lerp, project
from .errors import BadRate, InternalGeometry, TrajectoryError
from .linkpath import build_tube, link_reach, midpoint_select, min_link_path

__all__ = ["di", "mci", "vi", "vi_dimension", "canonicalize", "birth_mask", "SamplingRate"]


class SamplingRate(int):
    """Candidates per chord minus one; must be at least 1."""

    def __new__(cls, r):
        if isinstance(r, bool) or int(r) != r or r < 1:
            raise BadRate(f"sampling rate must be a positive integer, got {r!r}")
        return super().__new__(cls, int(r))

    @property
    def r(self):
        return int(self)


def _check(traj):
    if traj.n < 2:
        raise TrajectoryError("simplification needs at least two points")


def _permuted(traj, order):
    if order is None:
        return traj, None
    order = list(order)
    if sorted(order) != list(range(traj.dims)):
        raise TrajectoryError(f"order must be a permutation of 0..{traj.dims - 1}")
    return Trajectory(traj.t, traj.xs[:, order], validate=False), order


def _unpermute(out, order):
    if order is None:
        return out
    inv = np.argsort(order)
    mask = None if out.interpolated is None else out.interpolated[:, inv]
    return Trajectory(out.t, out.xs[:, inv], mask, validate=False)


def _full_path(proj, tol):
    return min_link_path(build_tube(proj, tol)).path


def birth_mask(birth, dims):
    """Mask with the first ``birth[i]`` dimensions of point i marked interpolated."""
    return np.arange(dims)[None, :] < np.asarray(birth)[:, None]


def canonicalize(traj):
    """Recompute interpolated coordinates exactly as a decoder would.

    Coordinate d of a point marked interpolated becomes the linear
    interpolation between the nearest points that store d.
    """
    mask = traj.interpolated
    if mask is None or not mask.any():
        return traj
    xs = traj.xs.copy()
    for d in range(traj.dims):
        own = ~mask[:, d]
        if own.all():
            continue
        xs[~own, d] = lerp(traj.t[own], xs[own, d], traj.t[~own])
    return Trajectory(traj.t, xs, mask, validate=False)


def di(traj, tol):
    """Direct interpolation: independent per-dimension link paths, merged on the union of timestamps."""
    _check(traj)
    tol = as_tolerance(tol, traj)
    if traj.n == 2:
        return Trajectory(traj.t, traj.xs, np.zeros(traj.xs.shape, bool), validate=False, method="di")
    paths = [_full_path(project(traj, d + 1), tol) for d in range(traj.dims)]
    out = Trajectory(paths[0].t, paths[0].x[:, None], validate=False)
    for p in paths[1:]:
        out = combine_interpolation(out, p.as_projection(), tol.eta)
    mask = np.column_stack([~np.isin(out.t, p.t) for p in paths])
    return Trajectory(out.t, out.xs, mask, validate=False, method="di")


def _merge(S, birth, proj, stage, eta):
    out = combine_interpolation(S, proj, eta)
    old = np.isin(out.t, S.t)
    nb = np.full(out.n, stage, dtype=int)
    nb[old] = birth
    return out, nb


def _concat(pieces):
    t = [pieces[0].t]
    x = [pieces[0].x]
    for p in pieces[1:]:
        t.append(p.t[1:])
        x.append(p.x[1:])
    return Projection1D(np.concatenate(t), np.concatenate(x), validate=False)


def _layered(traj, tol, order, solve_dim, name):
    _check(traj)
    tol = as_tolerance(tol, traj)
    if traj.n == 2:
        return Trajectory(traj.t, traj.xs, np.zeros(traj.xs.shape, bool), validate=False, method=name)
    work, order = _permuted(traj, order)
    p = _full_path(project(work, 1), tol)
    S = Trajectory(p.t, p.x[:, None], validate=False)
    birth = np.zeros(S.n, dtype=int)
    for d in range(1, work.dims):
        R = solve_dim(project(work, d + 1), S.t, tol)
        S, birth = _merge(S, birth, R, d, tol.eta)
    out = canonicalize(Trajectory(S.t, S.xs, birth_mask(birth, work.dims), validate=False))
    out = _unpermute(out, order)
    out.method = name
    return out


def _mci_dim(proj, cuts, tol):
    pieces = []
    k = None
    for a, b in zip(cuts[:-1], cuts[1:]):
        tube = build_tube(proj.slice(a, b), tol)
        res = min_link_path(tube, source=k)
        pieces.append(res.path)
        k = midpoint_select(res.terminal)
    return _concat(pieces)


def mci(traj, tol, order=None):
    """Midpoint correlated interpolation.

    ``order`` permutes the dimension processing order (default: input order).
    """
    return _layered(traj, tol, order, _mci_dim, "mci")


def vi_dimension(proj, cuts, tol, r):
    """Best piecewise path for one dimension cut at ``cuts``, with piece end
    points restricted to ``r + 1`` candidates per chord.

    Returns the path and its vertex count from the dynamic-programming table.
    """
    eps = tol.epsilon
    offs = np.array([(2.0 * q / r - 1.0) * eps for q in range(r + 1)])
    tubes = []
    cand = [proj.at(cuts[0]) + offs]
    for a, b in zip(cuts[:-1], cuts[1:]):
        tubes.append(build_tube(proj.slice(a, b), tol))
        cand.append(proj.at(b) + offs)
    cols = np.arange(r + 1)
    v = np.ones(r + 1, dtype=np.int64)
    back = np.zeros((len(tubes), r + 1), dtype=np.int64)
    for j, tube in enumerate(tubes):
        cost = np.empty((r + 1, r + 1), dtype=np.int64)
        for p in range(r + 1):
            k, I = link_reach(tube, float(cand[j][p]))
            inside = (cand[j + 1] >= I.lo) & (cand[j + 1] <= I.hi)
            cost[p] = v[p] + np.where(inside, k, k + 1)
        back[j] = np.argmin(cost, axis=0)
        v = cost[back[j], cols]
    q = int(np.argmin(v))
    best = int(v[q])
    qs = [q]
    for j in range(len(tubes) - 1, -1, -1):
        q = int(back[j, q])
        qs.append(q)
    qs.reverse()
    pieces = []
    for j, tube in enumerate(tubes):
        res = min_link_path(tube, float(cand[j][qs[j]]), float(cand[j + 1][qs[j + 1]]))
        pieces.append(res.path)
    R = _concat(pieces)
    if len(R) != best:
        raise InternalGeometry(f"materialized {len(R)} vertices, table says {best}")
    return R, best


def vi(traj, tol, rate=10, order=None):
    """Various interpolation: like ``mci`` but picks piece end points by dynamic
    programming over ``rate + 1`` candidates per chord."""
    r = getattr(rate, "r", rate)
    if not isinstance(r, (int, np.integer)) or isinstance(r, bool) or r < 1:
        raise BadRate(f"sampling rate must be a positive integer, got {rate!r}")
    r = int(r)
    return _layered(traj, tol, order, lambda proj, cuts, t: vi_dimension(proj, cuts, t, r)[0], "vi")
