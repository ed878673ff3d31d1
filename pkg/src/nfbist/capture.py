"""Binary capture files for comparator bitstreams.

Layout (little-endian throughout):

    bytes 0-3   magic "NFB1"
    bytes 4-7   format version (u32), currently 1
    bytes 8-15  sample rate in Hz (f64)
    bytes 16-23 bit count (u64)
    bytes 24-   bits packed 8 per byte, LSB first, bit value 1 <-> +1;
                unused bits in the final byte are zero

The round trip write_capture -> read_capture is lossless.
"""

from __future__ import annotations

import math
import struct

import numpy as np

from .digitizer import BitStream
from .errors import CaptureCorruptError, CaptureFormatError

__all__ = ["MAGIC", "VERSION", "write_capture", "read_capture"]

MAGIC = b"NFB1"
VERSION = 1
_HEADER = struct.Struct("<4sIdQ")


def write_capture(path, bits: BitStream) -> None:
    """Write a bitstream to ``path`` in NFB1 format."""
    ones = (bits.bits > 0).astype(np.uint8)
    payload = np.packbits(ones, bitorder="little").tobytes()
    header = _HEADER.pack(MAGIC, VERSION, bits.sample_rate_hz, bits.bits.size)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_capture(path) -> BitStream:
    """Read an NFB1 capture back into a BitStream."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise CaptureCorruptError(f"{path}: file shorter than the {_HEADER.size}-byte header")
    magic, version, sample_rate_hz, n_bits = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CaptureFormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise CaptureFormatError(f"{path}: unsupported format version {version}")
    if not math.isfinite(sample_rate_hz) or sample_rate_hz <= 0.0:
        raise CaptureCorruptError(f"{path}: invalid sample rate {sample_rate_hz!r}")
    if n_bits < 1:
        raise CaptureCorruptError(f"{path}: capture claims {n_bits} bits")
    expected_payload = (n_bits + 7) // 8
    payload = raw[_HEADER.size :]
    if len(payload) < expected_payload:
        raise CaptureCorruptError(
            f"{path}: truncated payload, have {len(payload)} bytes, need {expected_payload}"
        )
    if len(payload) > expected_payload:
        raise CaptureCorruptError(
            f"{path}: {len(payload) - expected_payload} trailing bytes after payload"
        )
    packed = np.frombuffer(payload, dtype=np.uint8)
    ones = np.unpackbits(packed, bitorder="little")
    if ones[n_bits:].any():
        raise CaptureCorruptError(f"{path}: nonzero padding bits after the payload")
    bits = ones[:n_bits].astype(np.int8) * 2 - 1
    return BitStream(sample_rate_hz, bits)
