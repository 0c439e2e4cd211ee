"""
Wavelet trees: rank/select/access over any alphabet
===================================================

A wavelet tree decomposes a symbol sequence into one bitmap per level,
giving rank, select, access, interval symbol counting, and distinct
counting in O(log sigma) bitmap operations. The bitmaps can be stored
plain or RRR-compressed; skewed inputs can also use the Huffman-shaped
variant, which makes frequent symbols shallow.
"""

import numpy as np

from succix import WaveletTree, WaveletTreeHuff

rng = np.random.default_rng(3)
n = 500_000

# a skewed byte sequence: low values dominate
seq = np.minimum(rng.geometric(0.08, n) - 1, 255).astype(np.uint8)

wt = WaveletTree(seq.astype(np.int64), sigma=256, backend="plain")
wt_rrr = WaveletTree(seq.astype(np.int64), sigma=256, backend="rrr")
huff = WaveletTreeHuff(seq, backend="plain")
huff_rrr = WaveletTreeHuff(seq, backend="rrr")

print("sequence of", n, "skewed bytes")
print("  balanced plain :", f"{wt.serialized_bytes():>9,}B")
print("  balanced rrr   :", f"{wt_rrr.serialized_bytes():>9,}B")
print("  huffman plain  :", f"{huff.serialized_bytes():>9,}B")
print("  huffman rrr    :", f"{huff_rrr.serialized_bytes():>9,}B")
print("  raw bytes      :", f"{seq.nbytes:>9,}B")

# the query interface is identical across shapes and backends
i, c = 123_456, 2
print(f"\naccess({i})      :", wt.access(i), huff.access(i), int(seq[i]))
true_rank = int((seq[:i] == c).sum())
print(f"rank({i}, c={c})   :", wt.rank(i, c), huff_rrr.rank(i, c), true_rank)
j = 1000
true_pos = int(np.flatnonzero(seq == c)[j - 1])
print(f"select({j}, c={c})  :", wt.select(j, c), huff.select(j, c), true_pos)

# interval queries: occurrences of c and distinct symbols in a slice
lo, hi = 200_000, 210_000
print(f"\ncount(lo, hi, {c}) :", wt.count(lo, hi, c),
      "== numpy", int((seq[lo:hi] == c).sum()))
print("distinct in slice:", wt.count_distinct(lo, hi),
      "== numpy", len(np.unique(seq[lo:hi])))
