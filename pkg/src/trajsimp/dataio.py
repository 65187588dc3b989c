"""CSV reading and writing, GPS log conversion, and the Wiener-process generator.

CSV rows are ``t,c1[,c2[,c3...]]``; a blank line separates trajectories.
Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import csv
import io
import math
from typing import NamedTuple

import numpy as np

from .core import Trajectory
from .errors import MalformedRow, NonMonotonicTime, TrajectoryError

__all__ = [
    "ParseResult",
    "parse_csv",
    "read_csv",
    "emit_csv",
    "write_csv",
    "gen_wiener",
    "plt_to_rows",
]


class ParseResult(NamedTuple):
    trajectories: list
    dropped: int  # rows removed by sanitizing


def _finish(rows, out):
    if not rows:
        return
    t = [r[0] for r in rows]
    xs = [r[1:] for r in rows]
    out.append(Trajectory(t, xs))


def parse_csv(stream, dims=None, sanitize=False):
    """Parse trajectories from a text stream or string.

    ``dims`` fixes the number of coordinates per row (inferred from the first
    row otherwise).  With ``sanitize`` rows whose timestamp does not exceed the
    previous one are dropped and counted; without it they raise
    NonMonotonicTime.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    out, rows, dropped = [], [], 0
    for lineno, line in enumerate(stream, 1):
        line = line.strip()
        if not line:
            _finish(rows, out)
            rows = []
            continue
        if line.startswith("#"):
            continue
        fields = next(csv.reader([line]))
        if dims is None:
            dims = len(fields) - 1
        if len(fields) != dims + 1 or dims < 1:
            raise MalformedRow(f"expected {dims + 1} fields, got {len(fields)}", lineno)
        try:
            vals = [float(f) for f in fields]
        except ValueError:
            raise MalformedRow(f"non-numeric field in {line!r}", lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise MalformedRow("non-finite value", lineno)
        if rows and vals[0] <= rows[-1][0]:
            if sanitize:
                dropped += 1
                continue
            raise NonMonotonicTime(f"t={vals[0]!r} does not exceed {rows[-1][0]!r}", lineno)
        rows.append(vals)
    _finish(rows, out)
    return ParseResult(out, dropped)


def read_csv(path, dims=None, sanitize=False):
    with open(path, newline="") as f:
        return parse_csv(f, dims, sanitize)


def emit_csv(trajs, stream=None):
    """Write trajectories with shortest round-tripping float formatting."""
    if isinstance(trajs, Trajectory):
        trajs = [trajs]
    buf = io.StringIO() if stream is None else stream
    for k, tr in enumerate(trajs):
        if k:
            buf.write("\n")
        for t, row in zip(tr.t.tolist(), tr.xs.tolist()):
            buf.write(",".join(repr(v) for v in [t, *row]) + "\n")
    if stream is None:
        return buf.getvalue()


def write_csv(path, trajs):
    with open(path, "w", newline="") as f:
        emit_csv(trajs, f)


def gen_wiener(m, n, dt=1.0, seed=0):
    """Random walk in m dims with N(0, dt) steps, starting at the origin; t_i = i*dt."""
    if n < 2:
        raise TrajectoryError("need at least two points")
    if not dt > 0:
        raise TrajectoryError("dt must be positive")
    rng = np.random.default_rng(seed)
    steps = rng.normal(0.0, math.sqrt(dt), size=(n - 1, m))
    xs = np.vstack([np.zeros((1, m)), np.cumsum(steps, axis=0)])
    return Trajectory(np.arange(n) * float(dt), xs, validate=False)


_EARTH_R = 6371008.8
_FEET = 0.3048
_DAY = 86400.0


def plt_to_rows(lines, origin=None, with_altitude=True):
    """Convert GeoLife-style PLT records to (t, x, y[, z]) rows in seconds and metres.

    Records are ``lat,lon,0,alt_ft,days,date,time``; the six header lines of a
    .plt file are skipped when present.  Positions use a local equirectangular
    projection around ``origin`` (lat, lon), defaulting to the first fix.
    """
    rows = []
    for line in lines:
        parts = line.strip().split(",")
        if len(parts) < 5:
            continue
        try:
            lat, lon, alt, days = float(parts[0]), float(parts[1]), float(parts[3]), float(parts[4])
        except ValueError:
            continue
        if origin is None:
            origin = (lat, lon)
        lat0, lon0 = origin
        x = math.radians(lon - lon0) * math.cos(math.radians(lat0)) * _EARTH_R
        y = math.radians(lat - lat0) * _EARTH_R
        row = [days * _DAY, x, y]
        if with_altitude:
            row.append(alt * _FEET)
        rows.append(row)
    return rows
