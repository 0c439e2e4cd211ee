"""Bit-packed integer vectors, plain bitvectors, and rank/select support.

Layout notes that the rest of the library relies on:
  * IntVector packs fixed-width values (1..64 bits) little-endian into
    64-bit words; value i occupies bits [i*w, (i+1)*w).
  * RankSupport keeps a two-level directory per 2048-bit superblock: one
    word with the absolute rank at the superblock start, one word packing
    five 11-bit relative counts at 384-bit offsets. Overhead is 128 bits
    per 2048, i.e. 6.25% of n, which stays under the 8% budget.
  * SelectSupport samples the position of every 4096th target bit and
    narrows with a binary search over the rank directory.
  * rank(i) counts target bits in [0, i); select(j) is 1-indexed and
    returns a 0-based position, so select(rank(i)+1) >= i wherever defined.
"""

import math

import numpy as np

from . import serialize
from .monitor import register_allocation

WORD = 64
_U64 = np.uint64
_FULL64 = np.uint64(0xFFFFFFFFFFFFFFFF)

# k-th (1-based) set bit position within a byte, 255 where absent.
_SELECT_IN_BYTE = np.full((256, 8), 255, dtype=np.uint8)
for _b in range(256):
    _k = 0
    for _j in range(8):
        if (_b >> _j) & 1:
            _SELECT_IN_BYTE[_b, _k] = _j
            _k += 1
del _b, _j, _k


def width_for(max_value):
    """Smallest width that can hold max_value (at least 1)."""
    mv = int(max_value)
    if mv < 0:
        raise ValueError("negative value in width computation")
    return max(1, mv.bit_length())


def mask_for(width):
    if width == 64:
        return _FULL64
    return np.uint64((1 << width) - 1)


def popcount_words(words):
    return np.bitwise_count(words)


def pack_ints(values, width):
    """Pack an integer array into little-endian 64-bit words."""
    values = np.ascontiguousarray(values, dtype=np.uint64)
    n = len(values)
    if not 1 <= width <= 64:
        raise ValueError("width must be between 1 and 64")
    if n and width < 64 and int(values.max()) >> width:
        raise ValueError(f"value does not fit in {width} bits")
    nwords = serialize.payload_words(n, width)
    words = np.zeros(nwords, dtype=np.uint64)
    if n == 0:
        return words
    group_bits = math.lcm(width, 64)
    per_group = group_bits // width
    words_per_group = group_bits // 64
    ngroups = n // per_group
    head = ngroups * per_group
    if ngroups:
        vals2d = values[:head].reshape(ngroups, per_group)
        words2d = words[: ngroups * words_per_group].reshape(
            ngroups, words_per_group
        )
        for j in range(per_group):
            bit = j * width
            wi, sh = bit >> 6, bit & 63
            col = vals2d[:, j]
            words2d[:, wi] |= col << np.uint64(sh)
            if sh + width > 64:
                words2d[:, wi + 1] |= col >> np.uint64(64 - sh)
    for i in range(head, n):
        v = int(values[i])
        bit = i * width
        wi, sh = bit >> 6, bit & 63
        words[wi] |= np.uint64((v << sh) & 0xFFFFFFFFFFFFFFFF)
        if sh + width > 64:
            words[wi + 1] |= np.uint64(v >> (64 - sh))
    return words


def gather_ints(words, width, positions):
    """Extract packed values at arbitrary indices (vectorized)."""
    positions = np.asarray(positions, dtype=np.int64)
    if len(positions) == 0:
        return np.empty(0, dtype=np.uint64)
    offs = positions * width
    wi = offs >> 6
    sh = (offs & 63).astype(np.uint64)
    last = len(words) - 1
    lo = words[wi] >> sh
    spill = (sh + np.uint64(width)) > 64
    hi_shift = (np.uint64(64) - sh) & np.uint64(63)
    hi = words[np.minimum(wi + 1, last)] << hi_shift
    out = np.where(spill, lo | hi, lo)
    return out & mask_for(width)


def unpack_ints(words, width, start, count):
    """Extract count packed values beginning at index start."""
    if count <= 0:
        return np.empty(0, dtype=np.uint64)
    return gather_ints(
        words, width, np.arange(start, start + count, dtype=np.int64)
    )


class IntVector:
    """Immutable fixed-width packed integer vector."""

    _magic = serialize.MAGIC_INTVEC
    _tag = "int_vector"

    def __init__(self, values=(), width=None):
        values = np.asarray(values, dtype=np.uint64)
        if width is None:
            width = width_for(int(values.max())) if len(values) else 1
        self.width = int(width)
        self.n = len(values)
        self.words = pack_ints(values, self.width)
        self._mask = mask_for(self.width)
        self._finish()

    @classmethod
    def from_words(cls, words, n, width):
        iv = cls.__new__(cls)
        iv.width = int(width)
        iv.n = int(n)
        if not 1 <= iv.width <= 64:
            raise ValueError("width must be between 1 and 64")
        nwords = serialize.payload_words(iv.n, iv.width)
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if len(words) != nwords:
            raise ValueError("word count does not match n and width")
        tail = iv.n * iv.width & 63
        if nwords and tail:
            words[-1] &= (np.uint64(1) << np.uint64(tail)) - np.uint64(1)
        iv.words = words
        iv._mask = mask_for(iv.width)
        iv._finish()
        return iv

    def _finish(self):
        register_allocation(self, self.words.nbytes, self._tag)

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        if isinstance(i, slice):
            start, stop, step = i.indices(self.n)
            vals = unpack_ints(self.words, self.width, start, max(0, stop - start))
            return vals[::step] if step != 1 else vals
        i = int(i)
        if i < 0:
            i += self.n
        if not 0 <= i < self.n:
            raise IndexError("index out of range")
        bit = i * self.width
        wi, sh = bit >> 6, bit & 63
        v = int(self.words[wi]) >> sh
        if sh + self.width > 64:
            v |= int(self.words[wi + 1]) << (64 - sh)
        return v & int(self._mask)

    def __iter__(self):
        return iter(self.to_numpy())

    def __eq__(self, other):
        if not isinstance(other, IntVector):
            return NotImplemented
        return (
            self.width == other.width
            and self.n == other.n
            and np.array_equal(self.words, other.words)
        )

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, width={self.width})"

    def to_numpy(self, start=0, stop=None):
        if stop is None:
            stop = self.n
        return unpack_ints(self.words, self.width, start, stop - start)

    @property
    def bit_size(self):
        return len(self.words) * 64

    def serialized_bytes(self):
        return serialize.serialized_bytes(self.n, self.width)

    def serialize(self, f):
        written = serialize.write_header(f, self._magic, self.width, self.n)
        data = self.words.astype("<u8", copy=False).tobytes()
        f.write(data)
        return written + len(data)

    @classmethod
    def deserialize(cls, f):
        magic, _, width, n = serialize.read_header(f, cls._magic)
        nwords = serialize.payload_words(n, width)
        raw = f.read(8 * nwords)
        if len(raw) != 8 * nwords:
            raise serialize.FormatError("truncated payload")
        words = np.frombuffer(raw, dtype="<u8").astype(np.uint64)
        return cls.from_words(words, n, width)

    def size_tree(self, name=None):
        from .sizereport import SizeTree

        return SizeTree(name or self._tag, self.serialized_bytes())


class BitVector(IntVector):
    """Plain bitvector; an IntVector of width 1 with bit conveniences."""

    _magic = serialize.MAGIC_BITVEC
    _tag = "bit_vector"

    def __init__(self, bits=()):
        bits = np.asarray(bits)
        if bits.dtype != np.bool_:
            bits = bits.astype(bool)
        self.width = 1
        self.n = len(bits)
        packed = np.packbits(bits, bitorder="little")
        nwords = serialize.payload_words(self.n, 1)
        buf = np.zeros(nwords * 8, dtype=np.uint8)
        buf[: len(packed)] = packed
        self.words = buf.view("<u8").astype(np.uint64)
        self._mask = mask_for(1)
        self._finish()

    @classmethod
    def from_positions(cls, positions, length):
        bits = np.zeros(length, dtype=bool)
        positions = np.asarray(positions, dtype=np.int64)
        if len(positions):
            if positions.min() < 0 or positions.max() >= length:
                raise ValueError("bit position out of range")
            bits[positions] = True
        return cls(bits)

    def to_bool(self):
        bytes_view = self.words.view(np.uint8)
        return np.unpackbits(bytes_view, bitorder="little", count=self.n).astype(bool)

    def count_ones(self):
        return int(popcount_words(self.words).sum())


class RankSupport:
    """Two-level rank directory over a BitVector (counts one-bits)."""

    SUPER_BITS = 2048
    SUB_BITS = 384
    _REL_MASK = np.uint64(0x7FF)

    def __init__(self, bv):
        self.bv = bv
        self._build()

    def _build(self):
        n = self.bv.n
        words = self.bv.words
        nsuper = -(-n // self.SUPER_BITS) if n else 0
        padded = np.zeros(32 * nsuper + 1, dtype=np.uint64)
        padded[: len(words)] = words
        cum = np.zeros(len(padded) + 1, dtype=np.int64)
        np.cumsum(popcount_words(padded), out=cum[1:])
        self.abs_counts = cum[::32][: nsuper + 1].copy()
        rel = np.zeros(nsuper + 1, dtype=np.uint64)
        for j in range(1, 6):
            counts = (cum[6 * j :: 32][:nsuper] - cum[::32][:nsuper]).astype(np.uint64)
            rel[:nsuper] |= counts << np.uint64(11 * (j - 1))
        self.rel_counts = rel
        self.total_ones = int(cum[len(words)])
        register_allocation(
            self, self.abs_counts.nbytes + self.rel_counts.nbytes, "rank_support"
        )

    def rank(self, i):
        """Number of one-bits in [0, i)."""
        i = int(i)
        if i <= 0:
            return 0
        if i >= self.bv.n:
            return self.total_ones
        s, r = i >> 11, i & 2047
        j = r // 384
        base = int(self.abs_counts[s])
        if j:
            base += (int(self.rel_counts[s]) >> (11 * (j - 1))) & 0x7FF
        words = self.bv.words
        w0 = (s << 5) + 6 * j
        wlast = i >> 6
        for t in range(w0, wlast):
            base += int(words[t]).bit_count()
        tail = i & 63
        if tail:
            base += (int(words[wlast]) & ((1 << tail) - 1)).bit_count()
        return base

    def rank0(self, i):
        i = max(0, min(int(i), self.bv.n))
        return i - self.rank(i)

    def rank_many(self, positions):
        """Vectorized rank over an int array of positions in [0, n]."""
        i = np.clip(np.asarray(positions, dtype=np.int64), 0, self.bv.n)
        s = i >> 11
        r = i & 2047
        j = r // 384
        base = self.abs_counts[s].astype(np.int64)
        relshift = (11 * np.maximum(j - 1, 0)).astype(np.uint64)
        rel = (self.rel_counts[s] >> relshift) & self._REL_MASK
        base += np.where(j > 0, rel.astype(np.int64), 0)
        words = self.bv.words
        if len(words) == 0:
            return base
        last = len(words) - 1
        w0 = (s << 5) + 6 * j
        wlast = i >> 6
        idx = w0[:, None] + np.arange(6)
        valid = idx < wlast[:, None]
        gathered = words[np.minimum(idx, last)]
        base += popcount_words(np.where(valid, gathered, 0)).sum(axis=1).astype(np.int64)
        tail = (i & 63).astype(np.uint64)
        tw = words[np.minimum(wlast, last)]
        tmask = (np.uint64(1) << tail) - np.uint64(1)
        base += popcount_words(np.where(tail > 0, tw & tmask, 0)).astype(np.int64)
        return base

    def serialized_bytes(self):
        return serialize.serialized_bytes(2 * len(self.abs_counts), 64)

    def serialize(self, f):
        dir_words = np.empty(2 * len(self.abs_counts), dtype=np.uint64)
        dir_words[0::2] = self.abs_counts.astype(np.uint64)
        dir_words[1::2] = self.rel_counts
        written = serialize.write_header(
            f, serialize.MAGIC_RANK, 64, len(dir_words)
        )
        data = dir_words.astype("<u8", copy=False).tobytes()
        f.write(data)
        return written + len(data)

    @classmethod
    def deserialize(cls, f, bv):
        _, _, _, length = serialize.read_header(f, serialize.MAGIC_RANK)
        raw = f.read(8 * length)
        if len(raw) != 8 * length:
            raise serialize.FormatError("truncated rank directory")
        dir_words = np.frombuffer(raw, dtype="<u8").astype(np.uint64)
        rs = cls.__new__(cls)
        rs.bv = bv
        rs.abs_counts = dir_words[0::2].astype(np.int64)
        rs.rel_counts = dir_words[1::2].copy()
        expected = -(-bv.n // cls.SUPER_BITS) + 1 if bv.n else 1
        if len(rs.abs_counts) != expected:
            raise serialize.FormatError("rank directory does not match bitvector")
        rs.total_ones = int(rs.abs_counts[-1])
        register_allocation(
            rs, rs.abs_counts.nbytes + rs.rel_counts.nbytes, "rank_support"
        )
        return rs

    def size_tree(self, name="rank"):
        from .sizereport import SizeTree

        return SizeTree(name, self.serialized_bytes())


class SelectSupport:
    """Sampled select over a BitVector for one bits or zero bits.

    Stores the position of every 4096th target bit; queries binary-search
    the rank directory between neighbouring samples, then scan words.
    """

    SAMPLE = 4096

    def __init__(self, bv, rank, value=1):
        self.bv = bv
        self.rank_support = rank
        self.value = int(value)
        bits = bv.to_bool()
        pos = np.flatnonzero(bits if self.value else ~bits)
        self.count = len(pos)
        self.samples = pos[:: self.SAMPLE].astype(np.int64)
        register_allocation(self, self.samples.nbytes, "select_support")

    def _abs_target(self, s):
        # target-bit count at superblock boundary s
        if self.value:
            return int(self.rank_support.abs_counts[s])
        return (s << 11) - int(self.rank_support.abs_counts[s])

    def select(self, j):
        """Position of the j-th (1-based) target bit."""
        j = int(j)
        if not 1 <= j <= self.count:
            raise ValueError(f"select index {j} out of range (m={self.count})")
        t = (j - 1) // self.SAMPLE
        lo_pos = int(self.samples[t])
        if j - 1 == t * self.SAMPLE:
            return lo_pos
        n = self.bv.n
        hi_pos = int(self.samples[t + 1]) if t + 1 < len(self.samples) else n - 1
        slo, shi = lo_pos >> 11, (hi_pos >> 11) + 1
        abs_counts = self.rank_support.abs_counts
        if self.value:
            targets = abs_counts
            s = int(np.searchsorted(targets[slo : shi + 1], j, side="left")) + slo - 1
        else:
            block = np.arange(slo, shi + 1, dtype=np.int64) << 11
            zeros = block - abs_counts[slo : shi + 1]
            s = int(np.searchsorted(zeros, j, side="left")) + slo - 1
        remaining = j - self._abs_target(s)
        words = self.bv.words
        rel = int(self.rank_support.rel_counts[s])
        sub = 0
        for jj in range(1, 6):
            cnt = (rel >> (11 * (jj - 1))) & 0x7FF
            if not self.value:
                cnt = 384 * jj - cnt
            if cnt < remaining:
                sub = jj
            else:
                break
        if sub:
            prev = (rel >> (11 * (sub - 1))) & 0x7FF
            remaining -= prev if self.value else 384 * sub - prev
        w = (s << 5) + 6 * sub
        while True:
            word = int(words[w]) if w < len(words) else 0
            if not self.value:
                word = ~word & 0xFFFFFFFFFFFFFFFF
            c = word.bit_count()
            if c >= remaining:
                break
            remaining -= c
            w += 1
        base = w << 6
        for byte_i in range(8):
            byte = (word >> (8 * byte_i)) & 0xFF
            c = byte.bit_count()
            if c >= remaining:
                return base + 8 * byte_i + int(_SELECT_IN_BYTE[byte, remaining - 1])
            remaining -= c
        raise AssertionError("select scan overran word")

    def serialized_bytes(self):
        width = width_for(max(self.bv.n - 1, 1))
        return serialize.HEADER_BYTES + serialize.serialized_bytes(
            len(self.samples), width
        )

    def serialize(self, f):
        width = width_for(max(self.bv.n - 1, 1))
        iv = IntVector(self.samples, width)
        written = serialize.write_header(
            f, serialize.MAGIC_SELECT, self.value, self.count
        )
        written += iv.serialize(f)
        return written

    @classmethod
    def deserialize(cls, f, bv, rank):
        _, _, value, count = serialize.read_header(f, serialize.MAGIC_SELECT)
        iv = IntVector.deserialize(f)
        ss = cls.__new__(cls)
        ss.bv = bv
        ss.rank_support = rank
        ss.value = value
        ss.count = count
        ss.samples = iv.to_numpy().astype(np.int64)
        register_allocation(ss, ss.samples.nbytes, "select_support")
        return ss

    def size_tree(self, name="select"):
        from .sizereport import SizeTree

        return SizeTree(name, self.serialized_bytes())


class BackedBits:
    """A BitVector bundled with rank (and optionally select) supports.

    This is the plain backend used by wavelet trees, Elias-Fano high parts
    and the RMQ parenthesis sequence; access/rank/select all in one place.
    """

    def __init__(self, bv, select1=False, select0=False):
        self.bits = bv
        self.rank_support = RankSupport(bv)
        self.select1_support = (
            SelectSupport(bv, self.rank_support, 1) if select1 else None
        )
        self.select0_support = (
            SelectSupport(bv, self.rank_support, 0) if select0 else None
        )

    def __len__(self):
        return self.bits.n

    def access(self, i):
        return self.bits[i]

    def rank(self, i):
        return self.rank_support.rank(i)

    def rank0(self, i):
        return self.rank_support.rank0(i)

    def select(self, j):
        return self.select1_support.select(j)

    def select0(self, j):
        return self.select0_support.select(j)

    def count_ones(self):
        return self.rank_support.total_ones

    def serialize(self, f):
        flags = (1 if self.select1_support else 0) | (
            2 if self.select0_support else 0
        )
        written = serialize.write_header(f, serialize.MAGIC_BITVEC, flags, 0)
        written += self.bits.serialize(f)
        written += self.rank_support.serialize(f)
        if self.select1_support:
            written += self.select1_support.serialize(f)
        if self.select0_support:
            written += self.select0_support.serialize(f)
        return written

    @classmethod
    def deserialize(cls, f):
        _, _, flags, _ = serialize.read_header(f, serialize.MAGIC_BITVEC)
        bv = BitVector.deserialize(f)
        bb = cls.__new__(cls)
        bb.bits = bv
        bb.rank_support = RankSupport.deserialize(f, bv)
        bb.select1_support = (
            SelectSupport.deserialize(f, bv, bb.rank_support) if flags & 1 else None
        )
        bb.select0_support = (
            SelectSupport.deserialize(f, bv, bb.rank_support) if flags & 2 else None
        )
        return bb

    def serialized_bytes(self):
        total = serialize.HEADER_BYTES + self.bits.serialized_bytes()
        total += self.rank_support.serialized_bytes()
        if self.select1_support:
            total += self.select1_support.serialized_bytes()
        if self.select0_support:
            total += self.select0_support.serialized_bytes()
        return total

    def size_tree(self, name="bits"):
        from .sizereport import SizeTree

        children = [
            self.bits.size_tree("payload"),
            self.rank_support.size_tree(),
        ]
        if self.select1_support:
            children.append(self.select1_support.size_tree("select1"))
        if self.select0_support:
            children.append(self.select0_support.size_tree("select0"))
        return SizeTree(name, serialize.HEADER_BYTES, children)
