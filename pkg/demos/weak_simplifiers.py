"""Direct, layered (MCI) and candidate-search (VI) simplification of a 2-D track."""

import numpy as np

from trajsimp import Tolerance, Trajectory, di, mci, opt, sync_distance, vi

t = np.arange(1.0, 7.0)
xy = np.column_stack([[3.5, 2.0, 4.5, 0.0, 1.0, 4.5], [0.0, 3.0, 2.6, 2.2, 1.8, 1.4]])
traj = Trajectory(t, xy)
tol = Tolerance.for_data(1.0, traj)

for name, out in (
    ("opt", opt(traj, tol)),
    ("di", di(traj, tol)),
    ("mci", mci(traj, tol)),
    ("vi r=10", vi(traj, tol, 10)),
):
    print(f"{name:8s} {out.n} points, distance {sync_distance(out, traj):.6f}")
    if out.interpolated is not None:
        for s, row, mask in zip(out.t, out.xs, out.interpolated):
            flags = "".join("i" if m else "s" for m in mask)
            print(f"    t={s:7.4f}  ({row[0]:7.4f}, {row[1]:7.4f})  {flags}")
