"""Trajectory model, linear interpolation and synchronized distances."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, BadMetric, DomainMismatch, OutOfDomain, TrajectoryError

__all__ = [
    "Trajectory",
    "Projection1D",
    "Tolerance",
    "lerp",
    "interpolate_at",
    "project",
    "zip_projections",
    "combine_interpolation",
    "sync_distance",
    "max_deviation",
    "default_eta",
]


def lerp(ts, xs, query):
    """Piecewise-linear evaluation of samples ``(ts, xs)`` at ``query``.

    Uses ``x_i + (x_{i+1} - x_i) / (t_{i+1} - t_i) * (t - t_i)`` on the
    bracketing segment and returns stored samples bit-exactly at sample times.
    Every interpolation in the package goes through this function so that
    encoder, decoder and simplifiers agree to the last bit.
    """
    ts = np.asarray(ts, dtype=float)
    xs = np.asarray(xs, dtype=float)
    q = np.asarray(query, dtype=float)
    scalar = q.ndim == 0
    q = np.atleast_1d(q)
    n = len(ts)
    if n == 1:
        out = np.broadcast_to(xs[0], q.shape + xs.shape[1:]).copy()
        return out[0] if scalar else out
    i = np.clip(np.searchsorted(ts, q, side="right") - 1, 0, n - 2)
    t0, t1 = ts[i], ts[i + 1]
    x0, x1 = xs[i], xs[i + 1]
    if xs.ndim == 2:
        t0, t1, qq = t0[:, None], t1[:, None], q[:, None]
    else:
        qq = q
    out = x0 + (x1 - x0) / (t1 - t0) * (qq - t0)
    out = np.where(qq == t1, x1, out)
    out = np.where(qq == t0, x0, out)
    return out[0] if scalar else out


def default_eta(scale):
    """Floating-point slack relative to the data's magnitude."""
    return 1e-9 * float(scale)


@dataclass(frozen=True)
class Tolerance:
    """Error bound ``epsilon`` plus the floating-point slack ``eta``."""

    epsilon: float
    eta: float = 1e-9

    def __post_init__(self):
        if not (self.epsilon >= 0) or not math.isfinite(self.epsilon):
            raise ValueError(f"epsilon must be a finite nonnegative number, got {self.epsilon}")
        if not (self.eta >= 0):
            raise ValueError(f"eta must be nonnegative, got {self.eta}")

    @classmethod
    def for_data(cls, epsilon, traj=None, eta=None):
        if eta is None:
            scale = traj.scale if traj is not None else 1.0
            eta = default_eta(scale if scale > 0 else max(epsilon, 1.0))
        return cls(float(epsilon), float(eta))


def as_tolerance(tol, traj=None):
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance.for_data(tol, traj)


class Trajectory:
    """Timestamped polyline in m-space.

    ``t`` has shape (n,), ``xs`` has shape (n, m).  Both are stored read-only.
    ``interpolated`` is an optional (n, m) boolean mask produced by the weak
    simplifiers: True where a coordinate is a linear interpolation of the
    neighbouring points that carry that dimension.  ``method`` names the
    simplifier that produced the trajectory, if any.
    """

    __slots__ = ("t", "xs", "interpolated", "method")

    def __init__(self, t, xs, interpolated=None, *, validate=True, method=None):
        t = np.array(t, dtype=float)
        xs = np.array(xs, dtype=float)
        if xs.ndim == 1:
            xs = xs[:, None]
        if validate:
            if t.ndim != 1 or xs.ndim != 2 or len(t) != len(xs):
                raise TrajectoryError("t must be (n,) and xs (n, m) with matching n")
            if len(t) < 1 or xs.shape[1] < 1:
                raise TrajectoryError("trajectory needs at least one point and one dimension")
            if not (np.all(np.isfinite(t)) and np.all(np.isfinite(xs))):
                raise TrajectoryError("non-finite coordinate or timestamp")
            if np.any(np.diff(t) <= 0):
                raise TrajectoryError("timestamps must increase strictly")
        t.setflags(write=False)
        xs.setflags(write=False)
        if interpolated is not None:
            interpolated = np.array(interpolated, dtype=bool)
            if interpolated.shape != xs.shape:
                raise TrajectoryError("interpolated mask must match xs shape")
            interpolated.setflags(write=False)
        self.t = t
        self.xs = xs
        self.interpolated = interpolated
        self.method = method

    @classmethod
    def from_points(cls, points):
        """Build from an iterable of ``(coords, t)`` pairs."""
        points = list(points)
        t = [p[1] for p in points]
        xs = [np.atleast_1d(np.asarray(p[0], dtype=float)) for p in points]
        return cls(t, np.vstack(xs))

    @property
    def n(self):
        return len(self.t)

    @property
    def dims(self):
        return self.xs.shape[1]

    @property
    def scale(self):
        return float(np.max(np.abs(self.xs))) if self.xs.size else 0.0

    def __len__(self):
        return len(self.t)

    def __repr__(self):
        return f"Trajectory(n={self.n}, dims={self.dims}, t=[{self.t[0]}, {self.t[-1]}])"

    def __eq__(self, other):
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (
            self.xs.shape == other.xs.shape
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.xs, other.xs)
        )

    __hash__ = None

    def bit_identical(self, other):
        """Equality on the raw IEEE-754 bit patterns (distinguishes -0.0)."""
        return (
            self.xs.shape == other.xs.shape
            and self.t.tobytes() == other.t.tobytes()
            and self.xs.tobytes() == other.xs.tobytes()
        )

    def at(self, t):
        return interpolate_at(self, t)

    def with_mask(self, mask):
        return Trajectory(self.t, self.xs, mask, validate=False, method=self.method)


class Projection1D:
    """One spatial dimension of a trajectory as a function of time."""

    __slots__ = ("t", "x")

    def __init__(self, t, x, *, validate=True):
        t = np.array(t, dtype=float)
        x = np.array(x, dtype=float)
        if validate:
            if t.shape != x.shape or t.ndim != 1:
                raise TrajectoryError("t and x must be 1-D arrays of equal length")
            if np.any(np.diff(t) <= 0):
                raise TrajectoryError("timestamps must increase strictly")
        t.setflags(write=False)
        x.setflags(write=False)
        self.t = t
        self.x = x

    def __len__(self):
        return len(self.t)

    def __repr__(self):
        return f"Projection1D(n={len(self.t)})"

    def at(self, t):
        if t < self.t[0] or t > self.t[-1]:
            raise OutOfDomain(f"t={t} outside [{self.t[0]}, {self.t[-1]}]")
        return float(lerp(self.t, self.x, t))

    def slice(self, t0, t1):
        """Restriction to [t0, t1], with interpolated samples at the ends."""
        if t0 < self.t[0] or t1 > self.t[-1] or t1 <= t0:
            raise OutOfDomain(f"[{t0}, {t1}] not inside [{self.t[0]}, {self.t[-1]}]")
        lo = np.searchsorted(self.t, t0, side="right")
        hi = np.searchsorted(self.t, t1, side="left")
        t = np.concatenate(([t0], self.t[lo:hi], [t1]))
        x = np.concatenate(([self.at(t0)], self.x[lo:hi], [self.at(t1)]))
        return Projection1D(t, x, validate=False)

    def as_trajectory(self):
        return Trajectory(self.t, self.x[:, None], validate=False)


def interpolate_at(traj, t):
    """Position of ``traj`` at time ``t`` (linear between samples)."""
    if t < traj.t[0] or t > traj.t[-1]:
        raise OutOfDomain(f"t={t} outside [{traj.t[0]}, {traj.t[-1]}]")
    return lerp(traj.t, traj.xs, t)


def project(traj, dim):
    """Projection on dimension ``dim`` (1-based, as in x=1, y=2, z=3)."""
    if not 1 <= dim <= traj.dims:
        raise BadDimension(f"dimension {dim} not in 1..{traj.dims}")
    return Projection1D(traj.t, traj.xs[:, dim - 1], validate=False)


def zip_projections(projs):
    """Inverse of ``project`` over all dims; timestamps must be identical."""
    t = projs[0].t
    for p in projs[1:]:
        if not np.array_equal(p.t, t):
            raise DomainMismatch("projections do not share timestamps")
    return Trajectory(t, np.column_stack([p.x for p in projs]), validate=False)


def _check_domain(t_a, t_b, eta):
    if abs(t_a[0] - t_b[0]) > eta or abs(t_a[-1] - t_b[-1]) > eta:
        raise DomainMismatch(
            f"time domains differ: [{t_a[0]}, {t_a[-1]}] vs [{t_b[0]}, {t_b[-1]}]"
        )


def combine_interpolation(base, nxt, eta=1e-9):
    """Append the 1-D trajectory ``nxt`` as a new last dimension of ``base``.

    Output timestamps are the sorted union of both timestamp sets; the
    existing coordinates come from interpolating ``base`` and the new one
    from interpolating ``nxt``.
    """
    _check_domain(base.t, nxt.t, eta)
    t = np.union1d(base.t, nxt.t)
    # snap the shared end points so the union has no near-duplicate ends
    t = t[(t >= base.t[0]) & (t <= base.t[-1])]
    old = lerp(base.t, base.xs, t)
    new = lerp(nxt.t, nxt.x, t)
    return Trajectory(t, np.column_stack([old, new]), validate=False)


def _norm(diff, p):
    if p in (math.inf, "inf", "Linf"):
        return np.max(np.abs(diff), axis=1)
    if p == 1:
        return np.sum(np.abs(diff), axis=1)
    if p == 2:
        return np.sqrt(np.sum(diff * diff, axis=1))
    raise BadMetric(f"unsupported metric p={p!r}; use 1, 2 or inf")


def max_deviation(a, b, p=math.inf, eta=1e-9):
    """Synchronized distance and the timestamp where it is attained.

    The coordinate difference of two piecewise-linear trajectories is linear
    between consecutive union timestamps and every L_p norm is convex, so the
    maximum over time is attained at one of those timestamps.
    """
    if a.dims != b.dims:
        raise DomainMismatch(f"dimension mismatch: {a.dims} vs {b.dims}")
    _check_domain(a.t, b.t, eta)
    lo, hi = max(a.t[0], b.t[0]), min(a.t[-1], b.t[-1])
    t = np.union1d(a.t, b.t)
    t = t[(t >= lo) & (t <= hi)]
    diff = lerp(a.t, a.xs, t) - lerp(b.t, b.xs, t)
    d = _norm(diff, p)
    k = int(np.argmax(d))
    return float(d[k]), float(t[k])


def sync_distance(a, b, p=math.inf, eta=1e-9):
    """max over t of ||a(t) - b(t)||_p for p in {1, 2, inf}."""
    return max_deviation(a, b, p, eta)[0]
