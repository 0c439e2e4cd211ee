"""Compressed suffix arrays over a packed text.

Two interchangeable flavors, both answering backward search, suffix
array access through sampled values, and text extraction:

* CsaPsi keeps one Elias-Fano list per symbol holding that symbol's
  slice of the Psi permutation. Pattern steps are two rank calls; text
  walks forward through Psi.
* CsaWt keeps a wavelet tree over the BWT. Pattern steps are two
  wavelet ranks; text walks backward through LF.

Suffix array samples are text-order marks (rows whose value is a
multiple of the rate), so a walk meets a mark within `rate` steps.
"""

import struct

import numpy as np

from . import serialize
from .bits import IntVector, width_for
from .compressed import SDVector
from .construct import SaSamples, bwt_from_sa, psi_from_bwt
from .wavelet import WaveletTree, WaveletTreeHuff, read_wavelet

_CHUNK = 1 << 20
_U32 = struct.Struct("<I")


class _CsaBase:
    """Shared pattern-matching driver; subclasses provide the steps."""

    def __len__(self):
        return self.n

    @property
    def sigma_total(self):
        return len(self.cnt) - 1

    def _interval_step(self, c, sp, ep):
        raise NotImplementedError

    def backward_search(self, pattern):
        """Suffix array interval [sp, ep] of the pattern, or None."""
        sp, ep = 0, self.n - 1
        sigma = self.sigma_total
        for c in reversed(list(pattern)):
            c = int(c)
            if not 0 <= c < sigma:
                return None
            sp, ep = self._interval_step(c, sp, ep)
            if sp > ep:
                return None
        return sp, ep

    def count(self, pattern):
        hit = self.backward_search(pattern)
        return 0 if hit is None else hit[1] - hit[0] + 1

    def locate(self, pattern):
        """Text positions of all occurrences, in suffix array order."""
        hit = self.backward_search(pattern)
        if hit is None:
            return np.empty(0, dtype=np.int64)
        sp, ep = hit
        return np.fromiter(
            (self.sa_access(i) for i in range(sp, ep + 1)),
            dtype=np.int64,
            count=ep - sp + 1,
        )

    def _symbol_at_row(self, row):
        """First symbol of the suffix at this row, from the CNT table."""
        return int(np.searchsorted(self.cnt, row, side="right")) - 1

    def _check_extract(self, start, length):
        if length < 0 or start < 0 or start + length > self.n:
            raise ValueError(
                f"extract({start}, {length}) outside text of length {self.n}"
            )


class CsaPsi(_CsaBase):
    """Compressed suffix array backed by per-symbol Psi lists."""

    def __init__(self, sds, cnt, samples, n):
        self.sds = sds
        self.cnt = np.asarray(cnt, dtype=np.int64)
        self.samples = samples
        self.n = n

    @classmethod
    def build(cls, text_iv, sa_iv, sigma_total, sample_rate, chunk=_CHUNK):
        bwt_iv = bwt_from_sa(text_iv, sa_iv, chunk)
        sds, cnt = psi_from_bwt(bwt_iv, sigma_total)
        samples = SaSamples.build(sa_iv, sample_rate, "text", chunk)
        return cls(sds, cnt, samples, text_iv.n)

    def psi(self, i):
        """Row of the suffix one position later in the text."""
        c = self._symbol_at_row(i)
        return self.sds[c].select(i - int(self.cnt[c]) + 1)

    def _interval_step(self, c, sp, ep):
        sd = self.sds[c]
        base = int(self.cnt[c])
        return base + sd.rank(sp), base + sd.rank(ep + 1) - 1

    def sa_access(self, i):
        """SA[i], by walking Psi forward to a sampled row."""
        j, t = int(i), 0
        while True:
            v = self.samples.lookup(j)
            if v is not None:
                return (v - t) % self.n
            j = self.psi(j)
            t += 1

    def extract(self, start, length):
        """Text symbols in [start, start+length), walking Psi forward."""
        self._check_extract(start, length)
        out = np.empty(length, dtype=np.int64)
        if length == 0:
            return out
        t0 = start // self.samples.rate
        j = self.samples.isa_sample(t0)
        for _ in range(start - t0 * self.samples.rate):
            j = self.psi(j)
        for k in range(length):
            out[k] = self._symbol_at_row(j)
            j = self.psi(j)
        return out

    def serialize(self, f):
        written = serialize.write_header(
            f, serialize.MAGIC_CSA_PSI, 0, self.n
        )
        f.write(_U32.pack(self.sigma_total))
        written += _U32.size
        written += self._cnt_iv().serialize(f)
        for sd in self.sds:
            written += sd.serialize(f)
        written += self.samples.serialize(f)
        return written

    def _cnt_iv(self):
        return IntVector(self.cnt, width_for(max(self.n, 1)))

    @classmethod
    def deserialize(cls, f):
        _, _, _, n = serialize.read_header(f, serialize.MAGIC_CSA_PSI)
        (sigma,) = _U32.unpack(f.read(_U32.size))
        cnt = IntVector.deserialize(f).to_numpy().astype(np.int64)
        sds = [SDVector.deserialize(f) for _ in range(sigma)]
        samples = SaSamples.deserialize(f)
        return cls(sds, cnt, samples, n)

    def serialized_bytes(self):
        return (
            serialize.HEADER_BYTES
            + _U32.size
            + self._cnt_iv().serialized_bytes()
            + sum(sd.serialized_bytes() for sd in self.sds)
            + self.samples.serialized_bytes()
        )

    def size_tree(self, name="csa_psi"):
        from .sizereport import SizeTree

        psi_total = sum(sd.serialized_bytes() for sd in self.sds)
        return SizeTree(
            name,
            serialize.HEADER_BYTES + _U32.size,
            [
                self._cnt_iv().size_tree("counts"),
                SizeTree("psi_lists", psi_total),
                self.samples.size_tree(),
            ],
        )


class CsaWt(_CsaBase):
    """Compressed suffix array backed by a wavelet tree over the BWT."""

    def __init__(self, wt, cnt, samples, n):
        self.wt = wt
        self.cnt = np.asarray(cnt, dtype=np.int64)
        self.samples = samples
        self.n = n

    @classmethod
    def build(
        cls,
        text_iv,
        sa_iv,
        sigma_total,
        sample_rate,
        backend="rrr",
        chunk=_CHUNK,
    ):
        bwt_iv = bwt_from_sa(text_iv, sa_iv, chunk)
        bwt = bwt_iv.to_numpy().astype(np.int64)
        del bwt_iv
        hist = np.bincount(bwt, minlength=sigma_total)
        cnt = np.zeros(sigma_total + 1, dtype=np.int64)
        np.cumsum(hist, out=cnt[1:])
        if sigma_total <= 256:
            wt = WaveletTreeHuff(bwt.astype(np.uint8), backend=backend)
        else:
            wt = WaveletTree(bwt, sigma=sigma_total, backend=backend)
        samples = SaSamples.build(sa_iv, sample_rate, "text", chunk)
        return cls(wt, cnt, samples, text_iv.n)

    def lf(self, i):
        """Row of the suffix one position earlier in the text."""
        c = self.wt.access(i)
        return int(self.cnt[c]) + self.wt.rank(i, c)

    def _interval_step(self, c, sp, ep):
        base = int(self.cnt[c])
        return base + self.wt.rank(sp, c), base + self.wt.rank(ep + 1, c) - 1

    def sa_access(self, i):
        """SA[i], by walking LF backward to a sampled row."""
        j, t = int(i), 0
        while True:
            v = self.samples.lookup(j)
            if v is not None:
                return (v + t) % self.n
            j = self.lf(j)
            t += 1

    def extract(self, start, length):
        """Text symbols in [start, start+length), walking LF backward."""
        self._check_extract(start, length)
        out = np.empty(length, dtype=np.int64)
        if length == 0:
            return out
        end = start + length
        rate = self.samples.rate
        t1 = -(-end // rate)
        if t1 * rate < self.n:
            j = self.samples.isa_sample(t1)
            steps = t1 * rate - end
        else:
            j = self.samples.isa_sample(0)
            steps = self.n - end
        for _ in range(steps):
            j = self.lf(j)
        for k in range(length - 1, -1, -1):
            out[k] = self.wt.access(j)
            j = self.lf(j)
        return out

    def serialize(self, f):
        written = serialize.write_header(f, serialize.MAGIC_CSA_WT, 0, self.n)
        f.write(_U32.pack(self.sigma_total))
        written += _U32.size
        written += self._cnt_iv().serialize(f)
        written += self.wt.serialize(f)
        written += self.samples.serialize(f)
        return written

    def _cnt_iv(self):
        return IntVector(self.cnt, width_for(max(self.n, 1)))

    @classmethod
    def deserialize(cls, f):
        _, _, _, n = serialize.read_header(f, serialize.MAGIC_CSA_WT)
        (sigma,) = _U32.unpack(f.read(_U32.size))
        cnt = IntVector.deserialize(f).to_numpy().astype(np.int64)
        wt = read_wavelet(f)
        samples = SaSamples.deserialize(f)
        return cls(wt, cnt, samples, n)

    def serialized_bytes(self):
        return (
            serialize.HEADER_BYTES
            + _U32.size
            + self._cnt_iv().serialized_bytes()
            + self.wt.serialized_bytes()
            + self.samples.serialized_bytes()
        )

    def size_tree(self, name="csa_wt"):
        from .sizereport import SizeTree

        return SizeTree(
            name,
            serialize.HEADER_BYTES + _U32.size,
            [
                self._cnt_iv().size_tree("counts"),
                self.wt.size_tree("bwt_wavelet"),
                self.samples.size_tree(),
            ],
        )


def read_csa(f):
    """Load whichever CSA flavor the stream holds."""
    magic = serialize.peek_magic(f)
    if magic == serialize.MAGIC_CSA_PSI:
        return CsaPsi.deserialize(f)
    if magic == serialize.MAGIC_CSA_WT:
        return CsaWt.deserialize(f)
    raise serialize.FormatError(f"not a suffix array stream: {magic!r}")
