"""Small benchmark: point counts relative to RDP on 2-D Wiener walks."""

import sys

from trajsimp.bench import parse_gen_spec, run_bench, write_records

data = parse_gen_spec("wiener:m=2,n=3000,dt=1,seeds=4")
rows = run_bench(data, ["opw", "opt", "mci", "vi"], [1.0, 4.0], rates=(10,), repeats=1)
write_records([r for r in rows if r.dataset == "mean"], sys.stdout)
