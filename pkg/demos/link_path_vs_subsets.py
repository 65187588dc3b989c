"""One coordinate at a time: a minimum-link path against point-subset simplifiers.

Six samples of a zig-zag, tolerance 1.  Subset methods must keep original
points; the link path may bend anywhere inside the tube and needs fewer
vertices.
"""

import numpy as np

from trajsimp import Projection1D, Tolerance, Trajectory, build_tube, min_link_path, opt, opw, rdp
from trajsimp.linkpath import dump_windows

t = np.arange(1.0, 7.0)
x = np.array([3.5, 2.0, 4.5, 0.0, 1.0, 4.5])
tol = Tolerance(1.0)

tube = build_tube(Projection1D(t, x), tol)
res = min_link_path(tube)
print("link path vertices:")
for s, z in zip(res.path.t, res.path.x):
    print(f"  t={s:.4f}  x={z:.4f}")
print(dump_windows(res), end="")

traj = Trajectory(t, x[:, None])
for name, fn in (("rdp", rdp), ("opw", opw), ("opt", opt)):
    out = fn(traj, tol)
    print(f"{name}: keeps t = {out.t.tolist()}")
