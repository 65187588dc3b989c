"""Command-line front end: simplify, verify, generate, bench."""

from __future__ import annotations

import argparse
import glob
import sys

import numpy as np

from . import bench as _bench
from .codec import MAGIC, decode, encode
from .core import Tolerance, max_deviation
from .dataio import emit_csv, gen_wiener, read_csv
from .errors import CodecError, NotPrefixForm, ParseError, TrajectoryError


def _load(path, dims=None, sanitize=False):
    with open(path, "rb") as f:
        head = f.read(4)
    if head == MAGIC:
        with open(path, "rb") as f:
            return [decode(f.read())]
    res = read_csv(path, dims, sanitize)
    if res.dropped:
        print(f"warning: dropped {res.dropped} rows with non-increasing time", file=sys.stderr)
    return res.trajectories


def _csv_list(text, cast):
    return [cast(v) for v in text.split(",") if v]


def cmd_simplify(args):
    trajs = _load(args.input, args.dims, args.sanitize)
    if args.format == "compact" and len(trajs) != 1:
        print("error: compact output holds exactly one trajectory", file=sys.stderr)
        return 2
    outs, worst = [], 0.0
    for tr in trajs:
        tol = Tolerance.for_data(args.epsilon, tr)
        out = _bench.simplify(tr, args.algo, tol, args.rate)
        worst = max(worst, max_deviation(out, tr)[0])
        outs.append(out)
    try:
        if args.format == "compact":
            data = encode(outs[0]).to_bytes()
            with open(args.output, "wb") as f:
                f.write(data)
        else:
            with open(args.output, "w") as f:
                emit_csv(outs, f)
    except NotPrefixForm as e:
        print(f"error: NotPrefixForm: {e}", file=sys.stderr)
        return 1
    n_in = sum(t.n for t in trajs)
    n_out = sum(t.n for t in outs)
    print(f"in_pts={n_in} out_pts={n_out} ratio={n_in / n_out:.6g} distance={worst!r}")
    return 0


def cmd_verify(args):
    try:
        simp = _load(args.input, args.dims)
        orig = _load(args.against, args.dims)
    except (OSError, ParseError, CodecError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if len(simp) != len(orig):
        print(f"VERIFY_FAIL trajectory count {len(simp)} != {len(orig)}")
        return 1
    worst, at = 0.0, None
    for s, o in zip(simp, orig):
        tol = Tolerance.for_data(args.epsilon, o)
        try:
            d, t = max_deviation(s, o, eta=tol.eta)
        except TrajectoryError as e:
            print(f"VERIFY_FAIL {e}")
            return 1
        if d > tol.epsilon + tol.eta:
            print(f"VERIFY_FAIL distance={d!r} t={t!r}")
            return 1
        if d >= worst:
            worst, at = d, t
    print(f"PASS distance={worst!r}")
    return 0


def cmd_generate(args):
    trajs = [gen_wiener(args.dims, args.n, args.dt, args.seed + k) for k in range(args.count)]
    with open(args.output, "w") as f:
        emit_csv(trajs, f)
    return 0


def _default_epsilons(datasets):
    spread = max(float(np.ptp(tr.xs, axis=0).max()) for _, tr in datasets)
    return list(np.geomspace(1e-3, 1.0, 8) * spread)


def cmd_bench(args):
    if args.gen:
        datasets = _bench.parse_gen_spec(args.gen)
    else:
        paths = sorted(glob.glob(args.input or ""))
        if not paths:
            print(f"error: no input matches {args.input!r}", file=sys.stderr)
            return 2
        datasets = []
        for p in paths:
            trajs = _load(p, args.dims, True)
            datasets += [(p if len(trajs) == 1 else f"{p}#{i}", tr) for i, tr in enumerate(trajs)]
    eps = _csv_list(args.epsilons, float) if args.epsilons else _default_epsilons(datasets)
    try:
        rows = _bench.run_bench(
            datasets, _csv_list(args.algos, str), eps, _csv_list(args.rates, int),
            repeats=args.repeats, max_points=args.max_points,
            sample_fraction=args.sample_fraction, threads=args.threads,
        )
    except _bench.ContractViolation as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if args.out in (None, "-"):
        _bench.write_records(rows, sys.stdout)
    else:
        with open(args.out, "w") as f:
            _bench.write_records(rows, f)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="trajsimp", description="Trajectory simplification under the synchronized L-infinity error.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("simplify", help="simplify a CSV trajectory file")
    s.add_argument("--algo", choices=_bench.ALGOS, required=True)
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--rate", type=int, default=10, help="candidates per chord minus one (vi)")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True)
    s.add_argument("--format", choices=("csv", "compact"), default="csv")
    s.add_argument("--dims", type=int)
    s.add_argument("--sanitize", action="store_true", help="drop rows with non-increasing time")
    s.set_defaults(func=cmd_simplify)

    v = sub.add_parser("verify", help="check that a simplification is within epsilon")
    v.add_argument("--epsilon", type=float, required=True)
    v.add_argument("--input", required=True, help="simplified trajectory (CSV or .limt)")
    v.add_argument("--against", required=True, help="original trajectory")
    v.add_argument("--dims", type=int)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", help="write Wiener-process trajectories as CSV")
    g.add_argument("--dims", type=int, default=2)
    g.add_argument("--n", type=int, default=10000)
    g.add_argument("--dt", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--output", required=True)
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bench", help="compression benchmark as CSV")
    b.add_argument("--algos", default="rdp,opw,opt,mci,vi")
    b.add_argument("--epsilons", help="comma list; default 8 log steps over [1e-3, 1] x spread")
    b.add_argument("--rates", default="10")
    src = b.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="glob of CSV files")
    src.add_argument("--gen", help="e.g. wiener:m=2,n=10000,dt=1,seeds=20")
    b.add_argument("--out", help="output CSV (default stdout)")
    b.add_argument("--dims", type=int)
    b.add_argument("--repeats", type=int, default=5)
    b.add_argument("--max-points", type=int, default=20000)
    b.add_argument("--sample-fraction", type=float, default=1.0)
    b.add_argument("--threads", type=int, default=1)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ParseError, CodecError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (TrajectoryError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
