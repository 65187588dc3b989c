"""Compression benchmark: output sizes, ratios against RDP, bit sizes and timing."""

from __future__ import annotations

import csv
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass

from .codec import encode, normal_bits
from .core import Tolerance, sync_distance
from .dataio import gen_wiener
from .strong import opt, opw, rdp
from .weak import di, mci, vi

__all__ = ["ALGOS", "BenchRecord", "HEADER", "simplify", "run_bench", "write_records", "parse_gen_spec"]

ALGOS = ("rdp", "opw", "opt", "di", "mci", "vi")
HEADER = "dataset,algo,epsilon,rate,in_pts,out_pts,ratio,rel_ratio,normal_bits,compact_bits,ns_per_pt".split(",")


def simplify(traj, algo, tol, rate=10):
    if algo == "vi":
        return vi(traj, tol, rate)
    fn = {"rdp": rdp, "opw": opw, "opt": opt, "di": di, "mci": mci}.get(algo)
    if fn is None:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGOS)}")
    return fn(traj, tol)


@dataclass
class BenchRecord:
    dataset: str
    algo: str
    epsilon: float
    rate: object  # int for vi, "" otherwise
    in_pts: int
    out_pts: float
    ratio: float
    rel_ratio: float
    normal_bits: float
    compact_bits: object
    ns_per_pt: float


class ContractViolation(RuntimeError):
    pass


def _timed(traj, algo, tol, rate, repeats):
    out = simplify(traj, algo, tol, rate)  # warm-up, also the result we keep
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        simplify(traj, algo, tol, rate)
        times.append(time.perf_counter_ns() - t0)
    return out, statistics.median(times) if times else 0.0


def _runs(algos, rates):
    for a in algos:
        if a == "vi":
            for r in rates:
                yield a, r
        else:
            yield a, ""


def _bench_one(name, traj, algos, eps, rates, repeats, opt_ok):
    tol = Tolerance.for_data(eps, traj)
    rows = []
    base, _ = _timed(traj, "rdp", tol, None, 0)
    for algo, rate in _runs(algos, rates):
        if algo == "opt" and not opt_ok:
            continue
        out, ns = _timed(traj, algo, tol, rate or None, repeats)
        d = sync_distance(out, traj)
        if d > tol.epsilon + tol.eta:
            raise ContractViolation(f"{algo} on {name} at eps={eps}: distance {d!r} exceeds bound")
        cbits = encode(out).payload_bits if algo in ("mci", "vi") else ""
        rows.append(
            BenchRecord(
                name, algo, eps, rate, traj.n, out.n, traj.n / out.n, out.n / base.n,
                normal_bits(out.n, out.dims), cbits, ns / traj.n,
            )
        )
    return rows


def run_bench(datasets, algos, epsilons, rates=(10,), repeats=5, max_points=20000,
              sample_fraction=1.0, threads=1, log=None):
    """One record per (trajectory, algorithm, epsilon[, rate]) plus per-(algo, eps, rate) means.

    ``datasets`` is a list of (name, Trajectory).  RDP always runs since it is
    the baseline of the relative ratio.  OPT is skipped on inputs longer than
    ``max_points`` and, with ``sample_fraction`` < 1, runs on that share of
    the trajectories only.
    """
    log = sys.stderr if log is None else log
    algos = list(dict.fromkeys(["rdp", *algos]))
    stride = max(1, round(1 / sample_fraction)) if sample_fraction > 0 else None
    jobs = []
    for idx, (name, traj) in enumerate(datasets):
        opt_ok = traj.n <= max_points and stride is not None and idx % stride == 0
        if "opt" in algos and traj.n > max_points:
            print(f"skipping opt on {name}: {traj.n} points > --max-points {max_points}", file=log)
        for eps in epsilons:
            jobs.append((name, traj, algos, eps, rates, repeats, opt_ok))
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(lambda j: _bench_one(*j), jobs))
    else:
        parts = [_bench_one(*j) for j in jobs]
    rows = [r for p in parts for r in p]
    return rows + _aggregate(rows)


def _aggregate(rows):
    groups = {}
    for r in rows:
        groups.setdefault((r.algo, r.epsilon, r.rate), []).append(r)
    out = []
    for (algo, eps, rate), g in groups.items():
        mean = lambda f: statistics.fmean(getattr(r, f) for r in g)
        cb = mean("compact_bits") if g[0].compact_bits != "" else ""
        out.append(
            BenchRecord(
                "mean", algo, eps, rate, round(mean("in_pts")), mean("out_pts"), mean("ratio"),
                mean("rel_ratio"), mean("normal_bits"), cb, mean("ns_per_pt"),
            )
        )
    return out


def write_records(rows, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(HEADER)
    for r in rows:
        w.writerow(astuple(r))


def parse_gen_spec(spec):
    """``wiener:m=2,n=10000,dt=1,seeds=20[,seed0=0]`` -> list of (name, Trajectory)."""
    kind, _, args = spec.partition(":")
    if kind != "wiener":
        raise ValueError(f"unknown generator {kind!r}")
    kw = dict(a.split("=", 1) for a in args.split(",") if a)
    m, n = int(kw.get("m", 2)), int(kw.get("n", 10000))
    dt, seeds, seed0 = float(kw.get("dt", 1.0)), int(kw.get("seeds", 1)), int(kw.get("seed0", 0))
    return [(f"wiener-m{m}-n{n}-s{s}", gen_wiener(m, n, dt, s)) for s in range(seed0, seed0 + seeds)]
