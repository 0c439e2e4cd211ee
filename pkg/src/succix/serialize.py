"""Shared on-disk framing.

Every serialized structure starts with the same 18-byte frame header:
magic tag (8 bytes), format version (1 byte), width (1 byte), element count
(8 bytes little-endian). Payloads are padded to whole 64-bit words.
Composite structures write a frame of their own followed by the frames of
their components in a fixed order.
"""

import struct

FORMAT_VERSION = 1
HEADER_BYTES = 18

MAGIC_INTVEC = b"sxintvec"
MAGIC_BITVEC = b"sxbitvec"
MAGIC_RANK = b"sxranksp"
MAGIC_SELECT = b"sxselsup"
MAGIC_RRR = b"sxrrrvec"
MAGIC_SD = b"sxsdvec\x00"
MAGIC_WT = b"sxwavtre"
MAGIC_CSA_PSI = b"sxcsapsi"
MAGIC_CSA_WT = b"sxcsawt\x00"
MAGIC_SAMPLES = b"sxsasamp"
MAGIC_ALPHABET = b"sxalphbt"
MAGIC_DOCISA = b"sxdocisa"
MAGIC_RMQ = b"sxrmqsct"
MAGIC_INDEX = b"sxdocidx"

_HEADER = struct.Struct("<8sBBQ")


class FormatError(ValueError):
    """Raised when a frame header does not match what the reader expects."""


def write_header(f, magic, width, length):
    """Write one frame header; returns bytes written."""
    if len(magic) != 8:
        raise ValueError("magic tag must be 8 bytes")
    if not 0 <= width <= 255:
        raise ValueError("width byte out of range")
    f.write(_HEADER.pack(magic, FORMAT_VERSION, width, length))
    return HEADER_BYTES


def read_header(f, expect=None):
    """Read one frame header; returns (magic, version, width, length)."""
    raw = f.read(HEADER_BYTES)
    if len(raw) != HEADER_BYTES:
        raise FormatError("truncated frame header")
    magic, version, width, length = _HEADER.unpack(raw)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}")
    if expect is not None and magic != expect:
        raise FormatError(f"expected {expect!r}, found {magic!r}")
    return magic, version, width, length


def peek_magic(f):
    pos = f.tell()
    raw = f.read(8)
    f.seek(pos)
    if len(raw) != 8:
        raise FormatError("truncated file")
    return raw


def payload_words(n, width):
    """Number of 64-bit payload words for n values of the given width."""
    return (n * width + 63) // 64


def serialized_bytes(n, width):
    """Exact frame size for a packed vector: header plus padded payload."""
    return HEADER_BYTES + 8 * payload_words(n, width)
