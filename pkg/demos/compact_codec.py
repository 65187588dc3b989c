"""Size of the compact encoding against plain binary64 storage on a random walk."""

from trajsimp import Tolerance, decode, encode, gen_wiener, mci, vi
from trajsimp.codec import HEADER_BITS, normal_bits

traj = gen_wiener(3, 5000, seed=7)
for eps in (0.5, 2.0, 8.0):
    tol = Tolerance.for_data(eps, traj)
    for name, out in (("mci", mci(traj, tol)), ("vi", vi(traj, tol, 10))):
        blob = encode(out)
        back = decode(blob.to_bytes())
        assert back.bit_identical(out)
        plain = normal_bits(out.n, out.dims)
        print(
            f"eps={eps:<4} {name:3s} points={out.n:5d} plain={plain:8d} bits "
            f"compact={blob.payload_bits:8d} bits (+{HEADER_BITS} header) "
            f"saving={1 - blob.payload_bits / plain:.1%}"
        )
