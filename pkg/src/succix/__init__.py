"""Compressed text indexing and top-k document retrieval.

Bit-packed vectors with rank/select, compressed bitmaps, wavelet trees,
compressed suffix arrays, succinct range-minimum structures, and three
interchangeable top-k document retrieval indexes built from them.
"""

from .bits import (
    BackedBits,
    BitVector,
    IntVector,
    RankSupport,
    SelectSupport,
)
from .compressed import RRRVector, SDVector
from .construct import (
    ByteAlphabet,
    Collection,
    DocIsaTable,
    SaSamples,
    WordAlphabet,
    build_suffix_array,
)
from .csa import CsaPsi, CsaWt, read_csa
from .docindex import (
    ALGOS,
    GreedyIndex,
    Hit,
    SadaIndex,
    SortIndex,
    build_greedy,
    build_index,
    build_sada,
    build_sort,
    load_index,
)
from .monitor import MemoryMonitor, memory_monitor
from .rmq import RmaxSct, RmqSct
from .sizereport import SizeTree, measure_serialized
from .wavelet import WaveletTree, WaveletTreeHuff

__version__ = "0.1.0"

__all__ = [
    "ALGOS",
    "BackedBits",
    "BitVector",
    "ByteAlphabet",
    "Collection",
    "CsaPsi",
    "CsaWt",
    "DocIsaTable",
    "GreedyIndex",
    "Hit",
    "IntVector",
    "MemoryMonitor",
    "RRRVector",
    "RankSupport",
    "RmaxSct",
    "RmqSct",
    "SDVector",
    "SaSamples",
    "SadaIndex",
    "SelectSupport",
    "SizeTree",
    "SortIndex",
    "WaveletTree",
    "WaveletTreeHuff",
    "WordAlphabet",
    "build_greedy",
    "build_index",
    "build_sada",
    "build_sort",
    "build_suffix_array",
    "load_index",
    "measure_serialized",
    "memory_monitor",
    "read_csa",
    "__version__",
]
