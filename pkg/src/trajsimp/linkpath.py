"""Tube polygons around 1-D projections and minimum-link paths through them.

A 1-D trajectory ``X(t)`` with tolerance ``eps`` defines the corridor
``X(t) - eps <= Z(t) <= X(t) + eps``.  Any piecewise-linear ``Z`` inside the
corridor is a valid simplification, and the one with the fewest links is the
optimal weak simplification of ``X``.

The corridor is x-monotone, so the link distance is computed with a single
left-to-right sweep instead of general polygon machinery.  Each link is a
straight line ``z = a + b (s - tau)``; the set of lines usable as the current
link is a convex polygon in the ``(a, b)`` plane, cut down by one half-plane
per tube boundary sample.  When the polygon empties, the line that survived
longest is the extreme visibility line.  Its part between its last tangency on
the opposite boundary and its exit point is the window: every point past the
window needs one more link, and the lines usable as the next link are exactly
those crossing the window and staying in the tube afterwards, which is again
a convex polygon.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np

from .core import Projection1D, Tolerance, as_tolerance, lerp
from .errors import InternalGeometry, TrajectoryError

__all__ = [
    "Chord",
    "TubePolygon",
    "LinkPath",
    "LinkResult",
    "Window",
    "build_tube",
    "min_link_path",
    "link_reach",
    "midpoint_select",
    "dump_windows",
]


@dataclass(frozen=True)
class Chord:
    """Vertical segment ``[lo, hi]`` at time ``t``."""

    t: float
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"chord lo {self.lo} > hi {self.hi}")

    @property
    def mid(self):
        return midpoint_select(self)

    @property
    def width(self):
        return self.hi - self.lo


def midpoint_select(interval):
    """Midpoint of an interval of optimal terminal points."""
    return 0.5 * (interval.lo + interval.hi)


class TubePolygon:
    """The +-eps corridor around a 1-D projection."""

    def __init__(self, proj, eps, eta=1e-9):
        if len(proj) < 2:
            raise TrajectoryError("a tube needs at least two samples")
        self.t = proj.t
        self.x = proj.x
        self.eps = float(eps)
        self.eta = float(eta)
        self.upper = proj.x + self.eps
        self.lower = proj.x - self.eps
        # plain lists are much faster than ndarrays for scalar access in the sweep
        self._t = self.t.tolist()
        self._x = self.x.tolist()

    @property
    def t_start(self):
        return self._t[0]

    @property
    def t_end(self):
        return self._t[-1]

    def __len__(self):
        return len(self._t)

    def center_at(self, s):
        return float(lerp(self.t, self.x, s))

    def upper_at(self, s):
        return self.center_at(s) + self.eps

    def lower_at(self, s):
        return self.center_at(s) - self.eps

    def chord(self, s):
        c = self.center_at(s)
        return Chord(s, c - self.eps, c + self.eps)

    @property
    def left_chord(self):
        return Chord(self._t[0], self._x[0] - self.eps, self._x[0] + self.eps)

    @property
    def right_chord(self):
        return Chord(self._t[-1], self._x[-1] - self.eps, self._x[-1] + self.eps)

    def contains(self, t, z, slack=None):
        slack = self.eta if slack is None else slack
        return abs(z - self.center_at(t)) <= self.eps + slack


def build_tube(proj, tol):
    tol = as_tolerance(tol)
    return TubePolygon(proj, tol.epsilon, tol.eta)


@dataclass
class LinkPath:
    """Polyline through a tube; ``t`` strictly increasing."""

    t: np.ndarray
    x: np.ndarray

    @property
    def vertices(self):
        return list(zip(self.x.tolist(), self.t.tolist()))

    def __len__(self):
        return len(self.t)

    @property
    def links(self):
        return len(self.t) - 1

    def as_projection(self):
        return Projection1D(self.t, self.x, validate=False)

    def at(self, s):
        return float(lerp(self.t, self.x, s))


@dataclass(frozen=True)
class Window:
    """Segment of an extreme visibility line that bounds a link-distance region."""

    t0: float
    z0: float
    t1: float
    z1: float


@dataclass
class LinkResult:
    path: LinkPath
    links: int
    terminal: Chord  # all end points on the destination reachable with `links` links
    windows: list = field(default_factory=list)


# --------------------------------------------------------------------------- sweep


class _Line:
    __slots__ = ("tau", "a", "b")

    def __init__(self, tau, a, b):
        self.tau = tau
        self.a = a
        self.b = b

    def __call__(self, s):
        return self.a + self.b * (s - self.tau)


def _cut(P, Q, fP, fQ, edge, h, v):
    """Point of edge PQ where the constraint a + b h = v holds.

    ``edge`` names the constraint PQ lies on, either (h_e, v_e) for
    a + b h_e = v_e or (None, b_e) for a fixed slope, so the vertex is the
    intersection of two lines instead of an interpolation (which loses
    precision next to very steep vertices).
    """
    he, ve = edge
    if he is None:
        return (v - ve * h, ve)
    if he != h:
        b = (v - ve) / (h - he)
        return (v - b * h, b)
    lam = min(max(fP / (fP - fQ), 0.0), 1.0)
    return (P[0] + (Q[0] - P[0]) * lam, P[1] + (Q[1] - P[1]) * lam)


def _box(lo, hi, B):
    """Start polygon: intercepts in [lo, hi] at h = 0, slopes in [-B, B]."""
    if lo == hi:
        return [(lo, -B), (lo, B)], [(0.0, lo), (0.0, lo)]
    poly = [(lo, -B), (hi, -B), (hi, B), (lo, B)]
    return poly, [(None, -B), (0.0, hi), (None, B), (0.0, lo)]


def _clip(poly, edges, h, v, sign, tol):
    """Clip convex polygon of lines (a, b) by sign * (a + b h - v) <= tol."""
    vals = [sign * (a + b * h - v) for a, b in poly]
    if max(vals) <= tol:
        return poly, edges
    if min(vals) > tol:
        return [], []
    vt = v + sign * tol
    new = (h, vt)
    out, oute = [], []
    n = len(poly)
    for i in range(n):
        j = i + 1 if i + 1 < n else 0
        P, fP = poly[i], vals[i] - tol
        Q, fQ = poly[j], vals[j] - tol
        e = edges[i]
        if fP <= 0:
            out.append(P)
            oute.append(e)
            if fQ > 0:
                out.append(_cut(P, Q, fP, fQ, e, h, vt))
                oute.append(new)
        elif fQ <= 0:
            out.append(_cut(P, Q, fP, fQ, e, h, vt))
            oute.append(e)
    res, rese = [], []
    for p, e in zip(out, oute):
        if res and p == res[-1]:
            rese[-1] = e
            continue
        res.append(p)
        rese.append(e)
    if len(res) > 1 and res[0] == res[-1]:
        res.pop()
        rese.pop()
    return res, rese


class _State:
    """Lines usable as one particular link, as a polygon at origin ``tau``."""

    __slots__ = ("tau", "poly", "edges", "cons", "ustart", "lstart", "entry", "B")

    def __init__(self, tau, poly, edges, cons, ustart, lstart, entry, B):
        self.tau = tau
        self.poly = poly
        self.edges = edges  # constraint under each edge poly[i] -> poly[i + 1]
        self.cons = cons  # (s, v, sign): sign * (line(s) - v) <= 0
        self.ustart = ustart
        self.lstart = lstart
        self.entry = entry  # (prev extreme line, window t0, window t1) or None
        self.B = B

    def line(self, vertex):
        return _Line(self.tau, vertex[0], vertex[1])


class _Sweep:
    def __init__(self, tube, src_lo, src_hi):
        self.tube = tube
        self.eps = tube.eps
        t, x = tube._t, tube._x
        self.ts, self.xs = t, x
        span = max(x) - min(x) + 2 * self.eps
        self.span = span if span > 0 else 1.0
        # clipping slack stays well inside eta so finished paths meet eps + eta
        self.tol = 0.25 * tube.eta
        noise = 1e-12 * (max(abs(v) for v in x) + self.eps)
        self.tight_tol = min(max(4 * tube.eta, noise), 0.01 * self.eps)
        self.lines = []  # extreme lines of links 1..k-1
        self.windows = []  # (t_start, t_end) of each window
        B = self._slope_bound([t[0], t[1]])
        poly, edges = _box(src_lo, src_hi, B)
        cons = [(t[0], src_hi, 1), (t[0], src_lo, -1)]
        self.state = _State(t[0], poly, edges, cons, t[0], t[0], None, B)
        self.src = (src_lo, src_hi)

    def _slope_bound(self, times):
        gap = min((b - a for a, b in zip(times, times[1:]) if b > a), default=1.0)
        return 4.0 * self.span / gap + 1.0

    def _center(self, s):
        i = bisect_right(self.ts, s) - 1
        if i >= len(self.ts) - 1:
            return self.xs[-1]
        if s == self.ts[i]:
            return self.xs[i]
        t0, t1 = self.ts[i], self.ts[i + 1]
        return self.xs[i] + (self.xs[i + 1] - self.xs[i]) / (t1 - t0) * (s - t0)

    def run(self):
        ts, xs, eps, tol = self.ts, self.xs, self.eps, self.tol
        i = 1
        n = len(ts)
        cur = ts[0]
        guard = 0
        while i < n:
            st = self.state
            s = ts[i]
            h = s - st.tau
            poly, edges = _clip(st.poly, st.edges, h, xs[i] + eps, 1, tol)
            if poly:
                poly, edges = _clip(poly, edges, h, xs[i] - eps, -1, tol)
            if poly:
                st.poly, st.edges = poly, edges
                st.cons.append((s, xs[i] + eps, 1))
                st.cons.append((s, xs[i] - eps, -1))
                cur = s
                i += 1
                continue
            T = self._exit(cur, i)
            if T <= cur:
                guard += 1
                if guard > 3:
                    raise InternalGeometry(f"link sweep stalled at t={cur}")
            else:
                guard = 0
            cur = T
        return self

    def _exit(self, cur, i):
        """Close the current link between ``cur`` and breakpoint ``i``; open the next."""
        st = self.state
        ts, xs, eps = self.ts, self.xs, self.eps
        t0, t1 = ts[i - 1], ts[i]
        sx = (xs[i] - xs[i - 1]) / (t1 - t0)
        xc = self._center(cur)
        lim = st.B * (1 - 1e-9)
        best = None
        for v in st.poly:
            if abs(v[1]) >= lim and len(st.poly) > 1:
                continue
            d0 = v[0] + v[1] * (cur - st.tau) - xc
            db = v[1] - sx
            if db > 0:
                hx = (eps - d0) / db
            elif db < 0:
                hx = (-eps - d0) / db
            else:
                hx = math.inf
            hx = max(hx, 0.0)
            if best is None or hx > best[0]:
                best = (hx, v, db)
        if best is None:
            best = (0.0, st.poly[0], st.poly[0][1] - sx)
        hx, v, db = best
        T = min(cur + hx, t1)
        if T < cur:
            T = cur
        line = st.line(v)
        below = db < 0  # line leaves the tube through the lower boundary
        sign = 1 if below else -1
        lo_clamp = self._entry_time(st, line)
        tA = self._latest_tight(st, line, sign, lo_clamp, T)
        zA = line(tA)
        zT = line(T)
        self.lines.append(line)
        self.windows.append((tA, T))
        # build the next link's state at origin T
        j0 = bisect_right(ts, tA)
        j1 = bisect_left(ts, T)
        cons = [(tA, zA, sign)]
        for j in range(j0, j1):
            c = xs[j] + eps if below else xs[j] - eps
            cons.append((ts[j], c, sign))
        xT = self._center(T)
        uT, lT = xT + eps, xT - eps
        cons.append((T, uT, 1))
        cons.append((T, lT, -1))
        cons.append((T, zT, -sign))
        times = [tA] + ts[j0:j1] + [T] + ([ts[j1]] if j1 < len(ts) and ts[j1] > T else ([ts[j1 + 1]] if j1 + 1 < len(ts) else []))
        B = self._slope_bound(sorted(set(times)))
        lo_a, hi_a = (max(lT, zT), uT) if below else (lT, min(uT, zT))
        if lo_a > hi_a:
            lo_a = hi_a = zT
        poly, edges = _box(lo_a, hi_a, B)
        tol = self.tol
        for s, c, sg in cons:
            nxt = _clip(poly, edges, s - T, c, sg, tol)
            if not nxt[0]:
                # rounding can over-cut the degenerate start; the window line itself is feasible
                continue
            poly, edges = nxt
        new = _State(T, poly, edges, cons, tA if below else T, T if below else tA, (line, tA, T), B)
        self.state = new
        return T

    def _entry_time(self, st, line):
        if st.entry is None:
            return self.ts[0]
        prev, w0, w1 = st.entry
        p = _crossing(prev, line, w0, w1)
        return min(p, max(st.ustart, st.lstart))

    def _latest_tight(self, st, line, sign, lo_clamp, hi):
        best = None
        tt = self.tight_tol
        for s, v, sg in st.cons:
            if sg != sign or s < lo_clamp or s > hi:
                continue
            if abs(line(s) - v) <= tt and (best is None or s > best):
                best = s
        return lo_clamp if best is None else best

    def terminal(self):
        st = self.state
        h = self.ts[-1] - st.tau
        vals = [a + b * h for a, b in st.poly]
        kmin = min(range(len(vals)), key=vals.__getitem__)
        kmax = max(range(len(vals)), key=vals.__getitem__)
        return vals[kmin], vals[kmax], st.poly[kmin], st.poly[kmax]


def _crossing(l1, l2, w0, w1):
    """Time in [w0, w1] where two lines cross (clamped)."""
    if w1 <= w0:
        return w0
    d0 = l1(w0) - l2(w0)
    d1 = l1(w1) - l2(w1)
    if d0 == d1:
        return w1
    s = w0 + (w1 - w0) * (d0 / (d0 - d1))
    return min(max(s, w0), w1)


def _normalize_source(tube, source):
    left = tube.left_chord
    if source is None:
        return left.lo, left.hi
    if isinstance(source, Chord):
        lo, hi = source.lo, source.hi
    else:
        lo = hi = float(source)
    slack = tube.eta
    if lo < left.lo - slack or hi > left.hi + slack:
        raise InternalGeometry(f"source [{lo}, {hi}] outside left chord [{left.lo}, {left.hi}]")
    return max(lo, left.lo) if lo != hi else lo, min(hi, left.hi) if lo != hi else hi


def _normalize_dest(tube, dest):
    right = tube.right_chord
    if dest is None:
        return right.lo, right.hi
    if isinstance(dest, Chord):
        lo, hi = dest.lo, dest.hi
    else:
        lo = hi = float(dest)
    slack = tube.eta
    if lo < right.lo - slack or hi > right.hi + slack:
        raise InternalGeometry(f"destination [{lo}, {hi}] outside right chord")
    if lo == hi:
        return lo, hi
    return max(lo, right.lo), min(hi, right.hi)


def _zero_width_path(tube, src, dst):
    t = np.asarray(tube._t)
    x = np.asarray(tube._x)
    eta = tube.eta
    if abs(src[0] - x[0]) > eta or abs(src[1] - x[0]) > eta:
        raise InternalGeometry("source off a zero-width tube")
    if x[-1] < dst[0] - eta or x[-1] > dst[1] + eta:
        raise InternalGeometry("destination off a zero-width tube")
    keep = _collinear_reduce(t, x, eta)
    path = LinkPath(t[keep].copy(), x[keep].copy())
    # the chord is narrower than eta, so every point of it counts as reached
    return LinkResult(path, len(keep) - 1, Chord(t[-1], x[-1] - tube.eps, x[-1] + tube.eps), [])


def _collinear_reduce(t, x, eta):
    """Drop samples lying within eta of the chord between kept neighbours."""
    keep = [0]
    n = len(t)
    for i in range(1, n - 1):
        a = keep[-1]
        seg = slice(a + 1, i + 1)
        pred = x[a] + (x[i + 1] - x[a]) / (t[i + 1] - t[a]) * (t[seg] - t[a])
        if np.max(np.abs(pred - x[seg])) > eta:
            keep.append(i)
    keep.append(n - 1)
    return keep


def link_reach(tube, source=None):
    """Link count ``k`` and the interval of the right chord reachable with ``k`` links.

    Points of the right chord outside the interval need exactly ``k + 1``.
    """
    src = _normalize_source(tube, source)
    if tube.eps <= tube.eta:
        x1 = tube._x[-1]
        res = _zero_width_path(tube, src, (x1, x1))
        return res.links, res.terminal
    sw = _Sweep(tube, *src).run()
    lo, hi, _, _ = sw.terminal()
    right = tube.right_chord
    lo, hi = max(lo, right.lo), min(hi, right.hi)
    if lo > hi:
        lo = hi = 0.5 * (lo + hi)
    return len(sw.lines) + 1, Chord(tube.t_end, lo, hi)


def min_link_path(tube, source=None, dest=None):
    """Minimum-link path from ``source`` to ``dest`` inside ``tube``.

    ``source`` is a Chord on the left edge, a float (a fixed point on it) or
    None for the whole left chord; ``dest`` likewise on the right edge.  The
    path ends at the midpoint of the optimal terminal interval (or at the
    fixed destination point).
    """
    src = _normalize_source(tube, source)
    dst = _normalize_dest(tube, dest)
    if tube.eps <= tube.eta:
        return _zero_width_path(tube, src, dst)
    sw = _Sweep(tube, *src).run()
    t_end = tube.t_end
    imin, imax, vmin, vmax = sw.terminal()
    st = sw.state
    lines = list(sw.lines)
    spans = list(sw.windows)
    lo, hi = max(imin, dst[0]), min(imax, dst[1])
    if lo <= hi:
        links = len(lines) + 1
        e = dst[0] if dst[0] == dst[1] else 0.5 * (lo + hi)
        terminal = Chord(t_end, lo, hi)
        if imax - imin > 0:
            lam = (e - imin) / (imax - imin)
            lam = min(max(lam, 0.0), 1.0)
            a = vmin[0] + (vmax[0] - vmin[0]) * lam
            b = vmin[1] + (vmax[1] - vmin[1]) * lam
        else:
            a, b = vmin
        final = _Line(st.tau, a, b)
        lines.append(final)
    else:
        # destination beyond the reachable interval: one more link across the
        # window formed by the extreme line at the nearer side
        links = len(lines) + 2
        above = dst[0] > imax
        ext = st.line(vmax if above else vmin)
        sign = 1 if above else -1
        lo_clamp = sw._entry_time(st, ext)
        tA = sw._latest_tight(st, ext, sign, lo_clamp, t_end)
        if tA >= t_end:
            tA = lo_clamp
        if above:
            tlo, thi = max(dst[0], imax), dst[1]
        else:
            tlo, thi = dst[0], min(dst[1], imin)
        e = dst[0] if dst[0] == dst[1] else 0.5 * (tlo + thi)
        terminal = Chord(t_end, tlo, thi)
        bounds = [(e - ext(tA)) / (t_end - tA)]
        for s, v, sg in st.cons:
            if sg == sign and tA <= s < t_end:
                bounds.append((e - v) / (t_end - s))
        b = max(bounds) if above else min(bounds)
        lines.append(ext)
        spans.append((tA, t_end))
        lines.append(_Line(t_end, e, b))
    # vertices: start, crossings of consecutive lines within their windows, end
    t0 = tube.t_start
    z0 = src[0] if src[0] == src[1] else min(max(lines[0](t0), src[0]), src[1])
    vt, vz = [t0], [z0]
    for j in range(len(lines) - 1):
        w0, w1 = spans[j]
        s = _crossing(lines[j], lines[j + 1], w0, w1)
        vt.append(s)
        vz.append(lines[j](s))
    vt.append(t_end)
    vz.append(e)
    path = _tidy(vt, vz)
    windows = [Window(w0, lines[j](w0), w1, lines[j](w1)) for j, (w0, w1) in enumerate(spans)]
    res = LinkResult(path, links, terminal, windows)
    _check_path(tube, res)
    return res


def _tidy(vt, vz):
    t, z = [vt[0]], [vz[0]]
    for s, v in zip(vt[1:], vz[1:]):
        if s <= t[-1]:
            # coincident vertex times: keep the later value on the final vertex only
            if len(t) > 1:
                t[-1], z[-1] = s if s > t[-2] else t[-1], v
            continue
        t.append(s)
        z.append(v)
    if t[-1] != vt[-1]:
        t.append(vt[-1])
        z.append(vz[-1])
    return LinkPath(np.array(t), np.array(z))


def _check_path(tube, res):
    p = res.path
    if len(p) < 2 or np.any(np.diff(p.t) <= 0):
        raise InternalGeometry("link path timestamps not strictly increasing")
    ts = np.union1d(tube.t, p.t)
    dev = np.max(np.abs(lerp(p.t, p.x, ts) - lerp(tube.t, tube.x, ts)))
    if dev > tube.eps + tube.eta:
        msg = f"link path leaves the tube by {dev - tube.eps:.3e}"
        t, x = np.asarray(tube.t), np.asarray(tube.x)
        step = np.abs(np.diff(x) / np.diff(t)) * np.spacing(np.abs(t[1:]))
        if step.max() > tube.eta:
            msg += "; the data moves more than eta within one float step of time, raise eta"
        raise InternalGeometry(msg)


def dump_windows(res):
    """Text listing of windows and the terminal interval, one per line."""
    lines = [f"window {w.t0!r} {w.z0!r} {w.t1!r} {w.z1!r}" for w in res.windows]
    c = res.terminal
    lines.append(f"terminal {c.t!r} {c.lo!r} {c.hi!r}")
    lines.append(f"links {res.links}")
    return "\n".join(lines) + "\n"
