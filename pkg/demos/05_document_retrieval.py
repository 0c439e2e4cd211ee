"""
Top-k document retrieval, three ways
====================================

A document collection is indexed once per algorithm; each returns the k
documents with the most pattern occurrences, ties broken by document id.
All three agree on every query; they differ in how the ranked list is
produced and in what they store next to the text index.
"""

from succix import ALGOS, ByteAlphabet, Collection, build_index

docs = [
    b"peach plum pear peach peach",
    b"plum plum pear",
    b"pear pear pear pear peach",
    b"quince",
    b"peach pear plum peach",
]
coll = Collection(docs, ByteAlphabet.from_docs(docs))

indexes = {algo: build_index(algo, coll, sample_rate=2) for algo in ALGOS}

for pattern in (b"peach", b"pear", b"plum p", b"quince"):
    rows = {a: idx.query(pattern, k=3) for a, idx in indexes.items()}
    first = [(h.doc, h.tf) for h in rows["sada"]]
    assert all([(h.doc, h.tf) for h in r] == first for r in rows.values())
    shown = ", ".join(f"doc {h.doc} (tf {h.tf})" for h in rows["sada"])
    print(f"top-3 for {pattern.decode()!r:>9}: {shown}")

# scores can also weight down terms that appear in many documents
idx = indexes["greedy"]
print("\ntf-idf for 'pear' (df =", idx.df(b"pear"), "of", coll.n_docs, "docs):")
for h in idx.query(b"pear", k=5, ranking="tfidf"):
    print(f"  doc {h.doc}: tf {h.tf}, score {h.score:.4f}")

# word-mode collections tokenize instead of matching raw bytes
from succix import WordAlphabet

word_docs = [d.split() for d in ["the cat sat", "the dog sat", "a cat and a cat"]]
wcoll = Collection(word_docs, WordAlphabet.from_docs(word_docs))
widx = build_index("sort", wcoll, sample_rate=1)
print("\nword mode, query ['cat']:",
      [(h.doc, h.tf) for h in widx.query(["cat"], k=3)])
