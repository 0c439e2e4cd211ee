"""
Size breakdowns and build-time memory profiling
===============================================

Every structure reports its serialized footprint as a component tree,
renderable as text, JSON, or a self-contained sunburst HTML page. The
package-global memory monitor additionally records tracked allocations
and named phases while an index is built.
"""

import os
import tempfile

import numpy as np

from succix import Collection, ByteAlphabet, build_sada, memory_monitor
from succix.corpus import render_docs, synth_symbol_docs

# a small synthetic corpus: 400 docs of skewed bytes
docs = render_docs(
    synth_symbol_docs(n_docs=400, sigma=48, mean_len=200, zipf_s=1.2, seed=6),
    "byte",
    sep=10,
)
coll = Collection(docs, ByteAlphabet.from_docs(docs))

# record the build: each construction stage is a named phase
memory_monitor.start()
idx = build_sada(coll, sample_rate=32)
memory_monitor.stop()

print("build phases (tracked peak per phase):")
for ph in memory_monitor.phases:
    ms = (ph["end_us"] - ph["begin_us"]) / 1000
    print(f"  {ph['label']:>13s}  {ph['peak_bytes']:>10,}B  {ms:8.1f}ms")

# the size tree explains where the index bytes live
tree = idx.size_tree()
print("\n" + tree.format(max_depth=2))

out = os.path.join(tempfile.mkdtemp(), "sada")
idx.save(out + ".idx")
tree.write_json(out + ".json")
tree.write_html(out + ".html")
print("root total equals the file on disk:",
      tree.total_bytes == os.path.getsize(out + ".idx"))
print("wrote", out + ".json", "and a sunburst at", out + ".html")
