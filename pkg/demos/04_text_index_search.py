"""
Compressed text indexes: count, locate, extract
===============================================

Both compressed suffix array flavors index a text so that patterns can
be counted and located, and any slice of the original text re-read,
without the text or the suffix array being stored explicitly. One walks
the successor permutation forward, the other steps a wavelet tree over
the transformed text backward; they answer identically.
"""

import numpy as np

from succix import ByteAlphabet, Collection, CsaPsi, CsaWt, build_suffix_array

# index a repetitive 47KB document
fable = (
    b"the quick brown fox jumps over the lazy dog while the lazy dog "
    b"dreams of the quick brown fox and the fox of the dog "
)
text = fable * 400
coll = Collection([text], ByteAlphabet.from_docs([text]))
text_iv = coll.packed_text()
_, sa_iv = build_suffix_array(coll.text)

psi_csa = CsaPsi.build(text_iv, sa_iv, coll.sigma_total, sample_rate=4)
wt_csa = CsaWt.build(text_iv, sa_iv, coll.sigma_total, sample_rate=4)

for pattern in (b"the", b"fox", b"lazy dog", b"cat"):
    ids = coll.alphabet.encode_pattern(pattern)
    hits = psi_csa.count(ids)
    assert wt_csa.count(ids) == hits
    first = sorted(int(p) for p in psi_csa.locate(ids))[:3] if hits else []
    print(f"{pattern.decode():>9} : {hits:>5} occurrence(s), first at {first}")

# extract re-reads any window from the index alone
start, length = 10, 15
window = psi_csa.extract(start, length)
assert wt_csa.extract(start, length).tolist() == window.tolist()
print("\nextract(10, 15) :", coll.alphabet.decode(window))

# the index is much smaller than text + suffix array
raw = len(text) + 8 * coll.n
print("\nindex bytes     :", psi_csa.serialized_bytes(), "(psi flavor)")
print("index bytes     :", wt_csa.serialized_bytes(), "(wavelet flavor)")
print("text + SA bytes :", raw)
