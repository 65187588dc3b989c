"""Compact binary representation of trajectories with interpolated leading coordinates.

A point whose first ``k`` coordinates are linear interpolations of the
neighbouring points that store them only needs its last ``m - k`` coordinates
and its timestamp.  Each point is prefixed by a codeword telling the decoder
how many coordinates follow:

    "0"                 all m coordinates stored
    "1" + (k - 1)       k leading coordinates interpolated, in ceil(log2(m - 1)) bits

so for m = 3 the codewords are "0" (3 stored), "10" (2 stored), "11" (1 stored).

File layout (``.limt``)::

    bytes 0-3   magic "LIMT"
    byte  4     version (1)
    byte  5     dims m
    bytes 6-13  point count, uint64 big-endian
    bytes 14-   bitstream, MSB first: per point codeword, stored coordinates
                (the last m - k dims, in order), timestamp; every value is an
                IEEE-754 binary64 in big-endian bit order.  The final byte is
                zero-padded.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .core import Trajectory, lerp
from .errors import BadMagic, NotPrefixForm, TruncatedStream, UnsupportedVersion

__all__ = [
    "CompactBlob",
    "BitWriter",
    "BitReader",
    "encode",
    "decode",
    "codeword",
    "codeword_bits",
    "normal_bits",
    "compact_bits",
    "payload_bits",
    "MAGIC",
    "VERSION",
    "HEADER_BITS",
]

MAGIC = b"LIMT"
VERSION = 1
_HEADER = struct.Struct(">4sBBQ")
HEADER_BITS = _HEADER.size * 8


class BitWriter:
    """MSB-first bit packer."""

    def __init__(self):
        self.buf = bytearray()
        self._acc = 0
        self._nacc = 0
        self.nbits = 0

    def write(self, value, nbits):
        if nbits == 0:
            return
        self._acc = (self._acc << nbits) | (value & ((1 << nbits) - 1))
        self._nacc += nbits
        self.nbits += nbits
        while self._nacc >= 8:
            self._nacc -= 8
            self.buf.append((self._acc >> self._nacc) & 0xFF)
        self._acc &= (1 << self._nacc) - 1

    def write_float(self, x):
        self.write(int.from_bytes(struct.pack(">d", x), "big"), 64)

    def getvalue(self):
        out = bytearray(self.buf)
        if self._nacc:
            out.append((self._acc << (8 - self._nacc)) & 0xFF)
        return bytes(out)


class BitReader:
    def __init__(self, data, nbits=None):
        self.data = bytes(data)
        self.pos = 0
        self.limit = len(self.data) * 8 if nbits is None else nbits

    def read(self, nbits):
        if nbits == 0:
            return 0
        end = self.pos + nbits
        if end > self.limit:
            raise TruncatedStream(f"need {nbits} bits at offset {self.pos}, stream has {self.limit}")
        b0, b1 = self.pos >> 3, (end + 7) >> 3
        chunk = int.from_bytes(self.data[b0:b1], "big")
        chunk >>= b1 * 8 - end
        self.pos = end
        return chunk & ((1 << nbits) - 1)

    def read_float(self):
        return struct.unpack(">d", self.read(64).to_bytes(8, "big"))[0]


def _suffix_bits(m):
    return math.ceil(math.log2(m - 1)) if m > 2 else 0


def codeword(k, m):
    """(value, nbits) of the codeword for a point with ``k`` interpolated leading dims."""
    if not 0 <= k < m:
        raise ValueError(f"k={k} out of range for m={m}")
    if k == 0:
        return 0, 1
    nb = _suffix_bits(m)
    return (1 << nb) | (k - 1), nb + 1


def codeword_bits(k, m):
    return codeword(k, m)[1]


def normal_bits(n, m):
    """Size of the plain representation: every coordinate and timestamp as binary64."""
    return n * (m + 1) * 64


def payload_bits(ks, m):
    """Bitstream size for points with the given interpolated-prefix lengths."""
    return sum(codeword_bits(k, m) + 64 * (m - k + 1) for k in ks)


@dataclass(frozen=True)
class CompactBlob:
    dims: int
    count: int
    payload: bytes
    payload_bits: int
    version: int = VERSION

    @property
    def total_bits(self):
        return HEADER_BITS + self.payload_bits

    def to_bytes(self):
        return _HEADER.pack(MAGIC, self.version, self.dims, self.count) + self.payload

    @classmethod
    def from_bytes(cls, data):
        data = bytes(data)
        if len(data) < _HEADER.size:
            if not MAGIC.startswith(data[:4]):
                raise BadMagic("not a compact trajectory stream")
            raise TruncatedStream(f"header needs {_HEADER.size} bytes, got {len(data)}")
        magic, version, dims, count = _HEADER.unpack_from(data)
        if magic != MAGIC:
            raise BadMagic(f"bad magic {magic!r}")
        if version != VERSION:
            raise UnsupportedVersion(f"version {version} not supported")
        payload = data[_HEADER.size :]
        return cls(dims, count, payload, len(payload) * 8, version)


def _prefix_lengths(mask):
    """Leading interpolated run per row; NotPrefixForm when a row is not of that form."""
    n, m = mask.shape
    k = np.argmin(np.concatenate([mask, np.zeros((n, 1), bool)], axis=1), axis=1)
    expect = np.arange(m)[None, :] < k[:, None]
    if not np.array_equal(expect, mask):
        bad = int(np.nonzero(np.any(expect != mask, axis=1))[0][0])
        raise NotPrefixForm(f"point {bad} has interpolated coordinates that are not a prefix")
    if np.any(k >= m):
        bad = int(np.nonzero(k >= m)[0][0])
        raise NotPrefixForm(f"point {bad} has no stored coordinate")
    if k[0] or k[-1]:
        raise NotPrefixForm("first and last points must store every coordinate")
    return k


def _reconstruct(t, xs, k):
    out = xs.copy()
    for d in range(xs.shape[1]):
        own = k <= d
        if not own.all():
            out[~own, d] = lerp(t[own], xs[own, d], t[~own])
    return out


def _settle(traj, k):
    """Lower k until every dropped coordinate is rebuilt bit-identically."""
    t, xs = traj.t, traj.xs
    while True:
        rec = _reconstruct(t, xs, k)
        wrong = rec.view(np.uint64) != xs.view(np.uint64)
        if not wrong.any():
            return k
        rows = np.nonzero(wrong.any(axis=1))[0]
        k = k.copy()
        k[rows] = np.argmax(wrong[rows], axis=1)


def infer_prefix(traj):
    """Largest-drop prefix lengths for a trajectory without a mask."""
    n, m = traj.xs.shape
    k = np.full(n, m - 1, dtype=int)
    k[0] = k[-1] = 0
    return _settle(traj, k)


def encode(traj, dims=None):
    """Encode to a CompactBlob.

    The trajectory's interpolated mask decides which coordinates are dropped;
    without a mask they are detected.  Dropped coordinates must be rebuilt
    bit-for-bit by the decoder; any that would not be are stored instead.
    """
    n, m = traj.xs.shape
    if dims is not None and dims != m:
        raise ValueError(f"trajectory has {m} dims, expected {dims}")
    if traj.method == "di":
        raise NotPrefixForm("direct-interpolation output has no interpolated-prefix layout")
    if m > 255:
        raise ValueError("at most 255 dimensions")
    if traj.interpolated is not None:
        k = _settle(traj, _prefix_lengths(traj.interpolated))
    else:
        k = infer_prefix(traj)
    w = BitWriter()
    xs, t = traj.xs.tolist(), traj.t.tolist()
    cw = [codeword(j, m) for j in range(m)]
    for i in range(n):
        ki = int(k[i])
        w.write(*cw[ki])
        for d in range(ki, m):
            w.write_float(xs[i][d])
        w.write_float(t[i])
    return CompactBlob(m, n, w.getvalue(), w.nbits)


def compact_bits(traj):
    """Payload size in bits of the compact form of ``traj``."""
    return encode(traj).payload_bits


def decode(blob):
    """Inverse of ``encode``; accepts a CompactBlob or raw bytes."""
    if not isinstance(blob, CompactBlob):
        blob = CompactBlob.from_bytes(blob)
    m, n = blob.dims, blob.count
    r = BitReader(blob.payload, blob.payload_bits)
    nb = _suffix_bits(m)
    t = np.empty(n)
    xs = np.zeros((n, m))
    k = np.zeros(n, dtype=int)
    for i in range(n):
        ki = 0 if r.read(1) == 0 else r.read(nb) + 1
        if ki >= m:
            raise TruncatedStream(f"point {i}: codeword for {ki} interpolated dims with m={m}")
        k[i] = ki
        for d in range(ki, m):
            xs[i, d] = r.read_float()
        t[i] = r.read_float()
    if n and (k[0] or k[-1]):
        raise TruncatedStream("end points must store every coordinate")
    xs = _reconstruct(t, xs, k)
    mask = np.arange(m)[None, :] < k[:, None]
    return Trajectory(t, xs, mask)
