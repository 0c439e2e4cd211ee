"""
Bit vectors, packed integers, and constant-time rank/select
============================================================

The two primitives everything else in succix is built from: a plain
bit vector with rank/select support, and a fixed-width packed integer
array.
"""

import io

import numpy as np

from succix import BackedBits, BitVector, IntVector

rng = np.random.default_rng(1)

# a bit vector over one million positions, about 30% ones
bits = rng.random(1_000_000) < 0.3
bv = BackedBits(BitVector(bits), select1=True, select0=True)

print("length          :", len(bv))
print("ones            :", bv.count_ones())

# rank(i) counts ones strictly before position i
i = 123_456
print(f"rank({i})    :", bv.rank(i), "== numpy", int(bits[:i].sum()))

# select(j) finds the position of the j-th one (1-indexed)
j = 100_000
pos = bv.select(j)
print(f"select({j})  :", pos)
print("rank(select(j)) :", bv.rank(pos), "== j-1 =", j - 1)
print(f"select0(500)    : {bv.select0(500)} (500th zero)")

# IntVector packs integers at any bit width from 1 to 64
vals = rng.integers(0, 1 << 20, 50_000)
iv = IntVector(vals, width=20)
print("\npacked 50k ints at 20 bits:")
print("  round-trips   :", bool(np.array_equal(iv.to_numpy(), vals)))
print("  payload bytes :", iv.serialized_bytes(), "vs raw int64:", vals.nbytes)

# everything serializes to a compact framed byte stream
buf = io.BytesIO()
bv.serialize(buf)
print("\nbit vector with both supports serializes to", len(buf.getvalue()), "bytes")
back = BackedBits.deserialize(io.BytesIO(buf.getvalue()))
print("reloaded select matches:", back.select(j) == pos)
