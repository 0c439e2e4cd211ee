"""Query pattern sampling from a document collection.

Patterns are windows of the concatenated text whose symbols all belong
to document bodies (never spanning a document boundary), drawn uniformly
with replacement so every sampled pattern has at least one occurrence.
"""

import warnings

import numpy as np

from .construct import FIRST_SYMBOL


def valid_windows(text, length):
    """Start positions whose next `length` symbols are all body symbols."""
    text = np.asarray(text)
    n = len(text)
    if length < 1 or length > n:
        return np.empty(0, dtype=np.int64)
    body = (text >= FIRST_SYMBOL).astype(np.int64)
    c = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(body, out=c[1:])
    starts = np.arange(0, n - length + 1, dtype=np.int64)
    return starts[c[starts + length] - c[starts] == length]


def gen_patterns(collection, length, count=200, seed=0):
    """Sample raw patterns of one length; empty list if none exist."""
    starts = valid_windows(collection.text, length)
    if len(starts) == 0:
        warnings.warn(
            f"no document window of length {length}; returning no patterns",
            stacklevel=2,
        )
        return []
    rng = np.random.default_rng(seed)
    picks = rng.choice(starts, size=count, replace=True)
    alphabet = collection.alphabet
    return [
        alphabet.decode(collection.text[p : p + length]) for p in picks
    ]


def write_patterns(patterns, path, mode):
    """One pattern per line (bytes for byte mode, tokens for word mode)."""
    if mode == "byte":
        with open(path, "wb") as f:
            for p in patterns:
                f.write(p)
                f.write(b"\n")
        return
    with open(path, "w", encoding="utf-8") as f:
        for p in patterns:
            f.write(" ".join(p))
            f.write("\n")


def read_patterns(path, mode):
    if mode == "byte":
        with open(path, "rb") as f:
            data = f.read()
        lines = data.split(b"\n")
        if lines and lines[-1] == b"":
            lines.pop()
        return lines
    with open(path, "r", encoding="utf-8") as f:
        return [line.split() for line in f if line.strip()]
