"""
Compressed bitmaps: RRR blocks and Elias-Fano positions
=======================================================

Two compressed alternatives to the plain bit vector, both answering the
same rank/select queries. RRR pays off on skewed (mostly-zero or
mostly-one) bitmaps; the SD vector stores only the one-positions and
wins when the bitmap is very sparse.
"""

import numpy as np

from succix import BitVector, RankSupport, RRRVector, SDVector

rng = np.random.default_rng(2)
n = 2_000_000


def plain_bytes(bits):
    bv = BitVector(bits)
    return bv.serialized_bytes() + RankSupport(bv).serialized_bytes()


for density in (0.5, 0.1, 0.01):
    bits = rng.random(n) < density
    ones = np.flatnonzero(bits)
    rrr = RRRVector(bits)
    sd = SDVector(ones, n)
    print(f"density {density:5.2f}:"
          f"  plain {plain_bytes(bits):>9,}B"
          f"  rrr {rrr.serialized_bytes():>9,}B"
          f"  sd {sd.serialized_bytes():>9,}B")

# all three give the same answers; spot-check the sparse case
bits = rng.random(n) < 0.01
ones = np.flatnonzero(bits)
bv = BitVector(bits)
rs = RankSupport(bv)
rrr = RRRVector(bits)
sd = SDVector(ones, n)

i = 777_777
print("\nrank at", i, ":", rs.rank(i), rrr.rank(i), sd.rank(i))
j = len(ones) // 2
print("median one at  :", int(ones[j - 1]), "==", rrr.select(j), "==", sd.select(j))

# the SD vector is an Elias-Fano coder for any monotone sequence
positions = np.cumsum(rng.integers(1, 1000, 10_000))
ef = SDVector(positions, int(positions[-1]) + 1)
print("\n10k monotone ints up to", int(positions[-1]))
print("elias-fano bytes:", ef.serialized_bytes(), "vs raw:", positions.nbytes)
print("select(5000)    :", ef.select(5000), "== raw", int(positions[4999]))
