"""Trajectory simplification under the synchronized L-infinity error bound.

Strong simplifiers (rdp, opw, opt) keep a subset of the input points; weak
ones (di, mci, vi) place new points along minimum-link paths.
"""

from .codec import CompactBlob, decode, encode
from .core import (
    Projection1D,
    Tolerance,
    Trajectory,
    combine_interpolation,
    interpolate_at,
    max_deviation,
    project,
    sync_distance,
)
from .dataio import emit_csv, gen_wiener, parse_csv
from .errors import *  # noqa: F403
from .linkpath import Chord, build_tube, link_reach, midpoint_select, min_link_path
from .strong import opt, opw, rdp
from .weak import di, mci, vi

__version__ = "0.1.0"
