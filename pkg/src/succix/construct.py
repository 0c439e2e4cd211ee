"""Collection model and index construction kernels.

A collection of N documents becomes one dense symbol string T: each
document's symbols (remapped to 2..) followed by a document terminator
(symbol 1), with a single global terminator (symbol 0) at the very end.
T therefore has length sum(doc lengths) + N + 1 and the terminator makes
all suffixes distinct.

Construction kernels here are written to keep packed structures (tracked
by the memory monitor) as the carried state; vectorized numpy scratch
inside a kernel is transient and intentionally untracked.
"""

import struct
from pathlib import Path

import numpy as np

from . import serialize
from .bits import IntVector, gather_ints, pack_ints, width_for
from .compressed import SDVector

GLOBAL_TERMINATOR = 0
DOC_TERMINATOR = 1
FIRST_SYMBOL = 2

_CHUNK = 1 << 20


class ByteAlphabet:
    """Dense remap of the byte values that actually occur."""

    kind = "byte"

    def __init__(self, present):
        self.comp2char = np.asarray(sorted(present), dtype=np.uint8)
        if len(self.comp2char) != len(set(self.comp2char.tolist())):
            raise ValueError("duplicate byte in alphabet")
        self.char2comp = np.full(256, -1, dtype=np.int64)
        self.char2comp[self.comp2char] = FIRST_SYMBOL + np.arange(
            len(self.comp2char), dtype=np.int64
        )

    @classmethod
    def from_docs(cls, docs):
        present = set()
        for doc in docs:
            present.update(doc)
        return cls(present)

    @property
    def sigma(self):
        """Number of distinct document symbols (terminators excluded)."""
        return len(self.comp2char)

    def encode_doc(self, doc):
        arr = np.frombuffer(bytes(doc), dtype=np.uint8)
        return self.char2comp[arr]

    def encode_pattern(self, pattern):
        """Comp ids for a query pattern, or None if a symbol is unknown."""
        if isinstance(pattern, str):
            pattern = pattern.encode()
        ids = self.char2comp[np.frombuffer(bytes(pattern), dtype=np.uint8)]
        if len(ids) and ids.min() < 0:
            return None
        return ids

    def decode(self, comps):
        comps = np.asarray(comps, dtype=np.int64)
        return bytes(self.comp2char[comps - FIRST_SYMBOL])

    def serialize(self, f):
        written = serialize.write_header(
            f, serialize.MAGIC_ALPHABET, 0, self.sigma
        )
        f.write(self.comp2char.tobytes())
        return written + self.sigma

    def serialized_bytes(self):
        return serialize.HEADER_BYTES + self.sigma


class WordAlphabet:
    """Token vocabulary; ids are assigned in lexicographic token order."""

    kind = "word"

    def __init__(self, tokens):
        self.tokens = sorted(tokens)
        self.token2id = {
            t: FIRST_SYMBOL + k for k, t in enumerate(self.tokens)
        }

    @classmethod
    def from_docs(cls, docs):
        vocab = set()
        for doc in docs:
            vocab.update(doc)
        return cls(vocab)

    @property
    def sigma(self):
        return len(self.tokens)

    def encode_doc(self, doc):
        return np.array([self.token2id[t] for t in doc], dtype=np.int64)

    def encode_pattern(self, pattern):
        if isinstance(pattern, str):
            pattern = pattern.split()
        ids = [self.token2id.get(t, -1) for t in pattern]
        if any(i < 0 for i in ids):
            return None
        return np.array(ids, dtype=np.int64)

    def decode(self, comps):
        comps = np.asarray(comps, dtype=np.int64)
        return [self.tokens[c - FIRST_SYMBOL] for c in comps]

    def write_sidecar(self, path):
        """token\tid mapping next to the index for external tooling."""
        with open(path, "w", encoding="utf-8") as f:
            for t in self.tokens:
                f.write(f"{t}\t{self.token2id[t]}\n")

    def serialize(self, f):
        written = serialize.write_header(
            f, serialize.MAGIC_ALPHABET, 1, self.sigma
        )
        blob = "\n".join(self.tokens).encode("utf-8")
        f.write(struct.pack("<Q", len(blob)))
        f.write(blob)
        return written + 8 + len(blob)

    def serialized_bytes(self):
        blob = "\n".join(self.tokens).encode("utf-8")
        return serialize.HEADER_BYTES + 8 + len(blob)


def read_alphabet(f):
    _, _, kind, count = serialize.read_header(f, serialize.MAGIC_ALPHABET)
    if kind == 0:
        raw = f.read(count)
        if len(raw) != count:
            raise serialize.FormatError("truncated alphabet")
        return ByteAlphabet(list(raw))
    (nbytes,) = struct.unpack("<Q", f.read(8))
    blob = f.read(nbytes).decode("utf-8")
    tokens = blob.split("\n") if blob else []
    if len(tokens) != count:
        raise serialize.FormatError("token count mismatch")
    return WordAlphabet(tokens)


def read_byte_docs(path, sep=10):
    """Documents from a file of sep-separated byte strings."""
    data = Path(path).read_bytes()
    sep_b = bytes([sep])
    if data.endswith(sep_b):
        data = data[:-1]
    if not data:
        return []
    return data.split(sep_b)


def read_word_docs(path):
    """Documents from a file with one whitespace-tokenized doc per line."""
    text = Path(path).read_text(encoding="utf-8")
    return [line.split() for line in text.splitlines()]


def load_docs(path, mode, sep=10):
    if mode == "byte":
        return read_byte_docs(path, sep)
    if mode == "word":
        return read_word_docs(path)
    raise ValueError(f"unknown mode {mode!r}")


class Collection:
    """Concatenated symbol string plus document geometry."""

    def __init__(self, docs, alphabet):
        if not docs:
            raise ValueError("collection needs at least one document")
        self.alphabet = alphabet
        self.n_docs = len(docs)
        encoded = [alphabet.encode_doc(d) for d in docs]
        lengths = np.array([len(e) for e in encoded], dtype=np.int64)
        n = int(lengths.sum()) + self.n_docs + 1
        T = np.empty(n, dtype=np.int64)
        offsets = np.empty(self.n_docs, dtype=np.int64)
        sharps = np.empty(self.n_docs, dtype=np.int64)
        pos = 0
        for d, ids in enumerate(encoded):
            offsets[d] = pos
            T[pos : pos + len(ids)] = ids
            pos += len(ids)
            T[pos] = DOC_TERMINATOR
            sharps[d] = pos
            pos += 1
        T[pos] = GLOBAL_TERMINATOR
        self.text = T
        self.n = n
        self.offsets = offsets
        self.lengths = lengths
        self.sharp_positions = sharps
        self.sigma_total = alphabet.sigma + FIRST_SYMBOL

    @classmethod
    def from_file(cls, path, mode, sep=10):
        docs = load_docs(path, mode, sep)
        alphabet = (
            ByteAlphabet.from_docs(docs)
            if mode == "byte"
            else WordAlphabet.from_docs(docs)
        )
        return cls(docs, alphabet)

    def packed_text(self):
        return IntVector(self.text, width_for(self.sigma_total - 1))

    def count_table(self):
        """CNT[c] = number of symbols in T smaller than c (len sigma+1)."""
        hist = np.bincount(self.text, minlength=self.sigma_total)
        cnt = np.zeros(self.sigma_total + 1, dtype=np.int64)
        np.cumsum(hist, out=cnt[1:])
        return cnt

    def doc_of_position(self, pos):
        return int(
            np.searchsorted(self.sharp_positions, pos, side="left")
        )


def build_suffix_array(T, pack_state=True):
    """Suffix array by prefix doubling with packed inter-round state.

    Returns (sa ndarray, sa_packed IntVector-or-None). With pack_state the
    rank state is carried bit-packed between rounds and the result is also
    returned packed, so a recording monitor sees the real working set.
    """
    T = np.asarray(T, dtype=np.int64)
    n = len(T)
    if n == 0:
        return np.empty(0, dtype=np.int64), None
    if n >= 1 << 31:
        raise ValueError("text too long for 32-bit doubling keys")
    rank_width = width_for(max(n - 1, 1))
    state = T
    state_iv = IntVector(T, width_for(max(int(T.max()), 1))) if pack_state else None
    k = 1
    sa = None
    while True:
        key = (state + 1) << 32
        key[: n - k] |= state[k:] + 1
        sa = np.argsort(key, kind="stable")
        sorted_key = key[sa]
        del key
        marks = np.empty(n, dtype=np.int64)
        marks[0] = 0
        marks[1:] = sorted_key[1:] != sorted_key[:-1]
        del sorted_key
        np.cumsum(marks, out=marks)
        distinct = int(marks[-1]) == n - 1
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[sa] = marks
        del marks
        if pack_state:
            state_iv = IntVector(new_rank, rank_width)
        if distinct or k >= n:
            break
        k <<= 1
        state = state_iv.to_numpy().astype(np.int64) if pack_state else new_rank
    sa_iv = IntVector(sa, rank_width) if pack_state else None
    return sa, sa_iv


def inverse_permutation(perm):
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty(len(perm), dtype=np.int64)
    inv[perm] = np.arange(len(perm), dtype=np.int64)
    return inv


def bwt_from_sa(text_iv, sa_iv, chunk=_CHUNK):
    """Packed BWT streamed from the packed SA; only chunks are unpacked."""
    n = sa_iv.n
    w = text_iv.width
    out_words = np.zeros(serialize.payload_words(n, w), dtype=np.uint64)
    assert chunk % 64 == 0
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        sa_chunk = sa_iv.to_numpy(start, stop).astype(np.int64)
        prev = (sa_chunk - 1) % n
        vals = gather_ints(text_iv.words, w, prev)
        packed = pack_ints(vals, w)
        woff = start * w // 64
        out_words[woff : woff + len(packed)] = packed
    return IntVector.from_words(out_words, n, w)


def psi_from_bwt(bwt_iv, sigma_total):
    """Per-symbol Psi lists as SDVectors, plus the CNT table.

    Psi as a permutation is the stable argsort of the BWT; the slice of
    rows belonging to symbol c is strictly increasing, which is exactly
    what Elias-Fano wants.
    """
    n = bwt_iv.n
    bwt = bwt_iv.to_numpy().astype(np.int64)
    psi = np.argsort(bwt, kind="stable")
    hist = np.bincount(bwt, minlength=sigma_total)
    del bwt
    cnt = np.zeros(sigma_total + 1, dtype=np.int64)
    np.cumsum(hist, out=cnt[1:])
    sds = [
        SDVector(psi[cnt[c] : cnt[c + 1]], n) for c in range(sigma_total)
    ]
    return sds, cnt


def d_from_sa(sa_iv, sharp_positions, n_docs, chunk=_CHUNK):
    """Packed document array: D[i] = document containing position SA[i]."""
    n = sa_iv.n
    w = width_for(max(n_docs, 1))
    out_words = np.zeros(serialize.payload_words(n, w), dtype=np.uint64)
    assert chunk % 64 == 0
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        sa_chunk = sa_iv.to_numpy(start, stop).astype(np.int64)
        d_chunk = np.searchsorted(sharp_positions, sa_chunk, side="left")
        packed = pack_ints(d_chunk.astype(np.uint64), w)
        woff = start * w // 64
        out_words[woff : woff + len(packed)] = packed
    return IntVector.from_words(out_words, n, w)


def prev_next_occurrence(d):
    """For each i: previous and next position with the same value.

    prev is -1 where none exists, next is len(d) where none exists.
    """
    d = np.asarray(d, dtype=np.int64)
    n = len(d)
    order = np.argsort(d, kind="stable")
    prev = np.full(n, -1, dtype=np.int64)
    nxt = np.full(n, n, dtype=np.int64)
    same = d[order][1:] == d[order][:-1]
    prev[order[1:][same]] = order[:-1][same]
    nxt[order[:-1][same]] = order[1:][same]
    return prev, nxt


class DocIsaTable:
    """Per-document inverse suffix arrays over doc + local terminator."""

    def __init__(self, tables):
        self.tables = tables

    @classmethod
    def build(cls, text, offsets, lengths):
        tables = []
        for off, ln in zip(offsets, lengths):
            local = np.empty(ln + 1, dtype=np.int64)
            local[:ln] = text[off : off + ln]
            local[ln] = GLOBAL_TERMINATOR
            sa, _ = build_suffix_array(local, pack_state=False)
            isa = inverse_permutation(sa)
            tables.append(IntVector(isa, width_for(max(int(ln), 1))))
        return cls(tables)

    def __len__(self):
        return len(self.tables)

    def get(self, d, local_pos):
        return self.tables[d][local_pos]

    def serialize(self, f):
        written = serialize.write_header(
            f, serialize.MAGIC_DOCISA, 0, len(self.tables)
        )
        for iv in self.tables:
            written += iv.serialize(f)
        return written

    @classmethod
    def deserialize(cls, f):
        _, _, _, count = serialize.read_header(f, serialize.MAGIC_DOCISA)
        return cls([IntVector.deserialize(f) for _ in range(count)])

    def serialized_bytes(self):
        return serialize.HEADER_BYTES + sum(
            iv.serialized_bytes() for iv in self.tables
        )

    def size_tree(self, name="doc_isa"):
        from .sizereport import SizeTree

        return SizeTree(name, self.serialized_bytes())


class SaSamples:
    """Sampled suffix array values plus inverse samples.

    text order marks rows whose SA value is a multiple of the rate; any
    Psi/LF walk then reaches a mark within `rate` steps. suffix order
    samples every rate-th row instead (no walk-length guarantee).
    """

    def __init__(self, rate, order, marked, values, isa_rows, n):
        self.rate = rate
        self.order = order
        self.marked = marked
        self.values = values
        self.isa_rows = isa_rows
        self.n = n

    @classmethod
    def build(cls, sa_iv, rate, order="text", chunk=_CHUNK):
        n = sa_iv.n
        rate = max(1, min(int(rate), n))
        if order not in ("text", "suffix"):
            raise ValueError(f"unknown sampling order {order!r}")
        n_text = (n + rate - 1) // rate
        isa_rows = np.zeros(n_text, dtype=np.int64)
        row_width = width_for(max(n - 1, 1))
        if order == "text":
            row_chunks = []
            val_chunks = []
            for start in range(0, n, chunk):
                stop = min(start + chunk, n)
                sa_chunk = sa_iv.to_numpy(start, stop).astype(np.int64)
                hit = sa_chunk % rate == 0
                rows = start + np.flatnonzero(hit)
                t = sa_chunk[hit] // rate
                isa_rows[t] = rows
                row_chunks.append(rows)
                val_chunks.append(t)
            all_rows = np.concatenate(row_chunks)
            all_vals = np.concatenate(val_chunks)
            marked = SDVector(all_rows, n)
            values = IntVector(
                all_vals, width_for(max((n - 1) // rate, 1))
            )
            return cls(
                rate, order, marked, values,
                IntVector(isa_rows, row_width), n,
            )
        vals = np.empty(n_text, dtype=np.int64)
        for start in range(0, n, chunk):
            stop = min(start + chunk, n)
            sa_chunk = sa_iv.to_numpy(start, stop).astype(np.int64)
            hit = sa_chunk % rate == 0
            t = sa_chunk[hit] // rate
            isa_rows[t] = start + np.flatnonzero(hit)
            first = -(-start // rate) * rate
            rows = np.arange(first, stop, rate)
            vals[rows // rate] = sa_chunk[rows - start]
        return cls(
            rate, order, None,
            IntVector(vals, row_width),
            IntVector(isa_rows, row_width), n,
        )

    def lookup(self, row):
        """SA value at this row if the row is sampled, else None."""
        if self.order == "text":
            before = self.marked.rank(row)
            if self.marked.rank(row + 1) == before:
                return None
            return self.values[before] * self.rate
        if row % self.rate:
            return None
        return self.values[row // self.rate]

    def isa_sample(self, t):
        """Row of the suffix starting at text position t*rate."""
        return self.isa_rows[t]

    def serialize(self, f):
        kind = 0 if self.order == "text" else 1
        written = serialize.write_header(
            f, serialize.MAGIC_SAMPLES, kind, self.n
        )
        f.write(struct.pack("<Q", self.rate))
        written += 8
        if self.marked is not None:
            written += self.marked.serialize(f)
        written += self.values.serialize(f)
        written += self.isa_rows.serialize(f)
        return written

    @classmethod
    def deserialize(cls, f):
        _, _, kind, n = serialize.read_header(f, serialize.MAGIC_SAMPLES)
        (rate,) = struct.unpack("<Q", f.read(8))
        order = "text" if kind == 0 else "suffix"
        marked = SDVector.deserialize(f) if order == "text" else None
        values = IntVector.deserialize(f)
        isa_rows = IntVector.deserialize(f)
        return cls(rate, order, marked, values, isa_rows, n)

    def serialized_bytes(self):
        total = serialize.HEADER_BYTES + 8
        if self.marked is not None:
            total += self.marked.serialized_bytes()
        total += self.values.serialized_bytes()
        total += self.isa_rows.serialized_bytes()
        return total

    def size_tree(self, name="sa_samples"):
        from .sizereport import SizeTree

        children = []
        if self.marked is not None:
            children.append(self.marked.size_tree("marked"))
        children.append(self.values.size_tree("values"))
        children.append(self.isa_rows.size_tree("isa_rows"))
        return SizeTree(name, serialize.HEADER_BYTES + 8, children)
