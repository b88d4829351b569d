"""THC1: bit-exact binary container for a quantized Tucker model.

Layout, all integers little-endian::

    0   4s   magic b"THC1"
    4   B    version (1)
    5   3x   reserved, zero
    8   3I   dims I1, I2, I3
    20  3I   ranks R1, R2, R3
    32  B    factor bits
    33  B    core bits
    34  2x   reserved, zero
    36       blocks u1, u2, u3, core; each block is
             d minimum, d maximum, Q code count,
             codes bit-packed LSB-first, zero-padded to a byte boundary

Codes of a block follow the column-major order of the source array
(``i1`` fastest for the core).
"""

import struct
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import FormatError

MAGIC = b"THC1"
VERSION = 1
MIN_BITS = 2
MAX_BITS = 16

_HEADER = struct.Struct("<4sB3s3I3IBB2s")
_BLOCK_HEADER = struct.Struct("<ddQ")

HEADER_BYTES = _HEADER.size
BLOCK_HEADER_BYTES = _BLOCK_HEADER.size
# fixed overhead of a container, plus the worst-case padding of its four blocks
OVERHEAD_BITS = 8 * (HEADER_BYTES + 4 * BLOCK_HEADER_BYTES) + 4 * 7


@dataclass(frozen=True)
class QuantizedArray:
    bits: int
    minimum: float
    maximum: float
    codes: np.ndarray  # unsigned, flattened column-major

    def __post_init__(self):
        if not MIN_BITS <= self.bits <= MAX_BITS:
            raise ValueError(f"bits must lie in [{MIN_BITS}, {MAX_BITS}], got {self.bits}")
        if not self.maximum >= self.minimum:
            raise ValueError(f"maximum {self.maximum} is below minimum {self.minimum}")

    def __eq__(self, other):
        if not isinstance(other, QuantizedArray):
            return NotImplemented
        return (
            self.bits == other.bits
            and _same_float(self.minimum, other.minimum)
            and _same_float(self.maximum, other.maximum)
            and np.array_equal(self.codes, other.codes)
        )


def _same_float(a, b):
    return struct.pack("<d", a) == struct.pack("<d", b)


@dataclass(frozen=True, eq=False)
class CompressedCube:
    dims: Tuple[int, int, int]
    ranks: Tuple[int, int, int]
    factor_bits: int
    core_bits: int
    factors: Tuple[QuantizedArray, QuantizedArray, QuantizedArray]
    core: QuantizedArray

    def __eq__(self, other):
        if not isinstance(other, CompressedCube):
            return NotImplemented
        return encode(self) == encode(other)

    @property
    def size_bytes(self):
        return HEADER_BYTES + sum(BLOCK_HEADER_BYTES + _packed_len(q.codes.size, q.bits) for q in self.blocks)

    @property
    def blocks(self):
        return (*self.factors, self.core)

    @property
    def bpppb(self):
        """Achieved rate: container bits per pixel per band."""
        return 8 * self.size_bytes / float(np.prod(self.dims))


def _packed_len(count, bits):
    return (count * bits + 7) // 8


def pack_codes(codes, bits):
    """Pack unsigned ``bits``-wide codes into bytes, LSB first."""
    codes = np.asarray(codes, dtype=np.uint32).ravel()
    if codes.size and int(codes.max()) >= 1 << bits:
        raise ValueError(f"code {int(codes.max())} does not fit in {bits} bits")
    bitplanes = (codes[:, None] >> np.arange(bits, dtype=np.uint32)) & 1
    return np.packbits(bitplanes.astype(np.uint8).ravel(), bitorder="little").tobytes()


def unpack_codes(data, count, bits):
    stream = np.unpackbits(np.frombuffer(data, dtype=np.uint8), bitorder="little")[: count * bits]
    weights = np.uint32(1) << np.arange(bits, dtype=np.uint32)
    return (stream.reshape(count, bits).astype(np.uint32) * weights).sum(axis=1, dtype=np.uint32)


def encode(cube):
    head = _HEADER.pack(
        MAGIC, VERSION, b"\0\0\0", *cube.dims, *cube.ranks, cube.factor_bits, cube.core_bits, b"\0\0"
    )
    parts = [head]
    for q in cube.blocks:
        parts.append(_BLOCK_HEADER.pack(q.minimum, q.maximum, q.codes.size))
        parts.append(pack_codes(q.codes, q.bits))
    return b"".join(parts)


def _expected_counts(dims, ranks):
    (i1, i2, i3), (r1, r2, r3) = dims, ranks
    return (i1 * r1, i2 * r2, i3 * r3, r1 * r2 * r3)


def decode(data):
    """Parse a THC1 byte string; malformed input raises :class:`FormatError` with the byte offset."""
    data = bytes(data)
    if len(data) < HEADER_BYTES:
        raise FormatError(f"container is {len(data)} bytes, shorter than the {HEADER_BYTES}-byte header", offset=len(data))
    magic, version, reserved, i1, i2, i3, r1, r2, r3, fbits, cbits, reserved2 = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", offset=0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", offset=4)
    if reserved != b"\0\0\0":
        raise FormatError("reserved header bytes are not zero", offset=5)
    dims, ranks = (i1, i2, i3), (r1, r2, r3)
    if min(dims) < 1:
        raise FormatError(f"dims must be positive, got {dims}", offset=8)
    for n, (r, d) in enumerate(zip(ranks, dims)):
        if not 1 <= r <= d:
            raise FormatError(f"rank {r} outside [1, {d}]", offset=20 + 4 * n)
    for off, b in ((32, fbits), (33, cbits)):
        if not MIN_BITS <= b <= MAX_BITS:
            raise FormatError(f"bit width {b} outside [{MIN_BITS}, {MAX_BITS}]", offset=off)
    if reserved2 != b"\0\0":
        raise FormatError("reserved header bytes are not zero", offset=34)

    offset = HEADER_BYTES
    blocks = []
    for count, bits in zip(_expected_counts(dims, ranks), (fbits, fbits, fbits, cbits)):
        if len(data) < offset + BLOCK_HEADER_BYTES:
            raise FormatError("block header is truncated", offset=len(data))
        lo, hi, stored = _BLOCK_HEADER.unpack_from(data, offset)
        if stored != count:
            raise FormatError(f"block holds {stored} codes, expected {count}", offset=offset + 16)
        if not (np.isfinite(lo) and np.isfinite(hi) and hi >= lo):
            raise FormatError(f"invalid block range [{lo}, {hi}]", offset=offset)
        offset += BLOCK_HEADER_BYTES
        nbytes = _packed_len(count, bits)
        if len(data) < offset + nbytes:
            raise FormatError(f"block payload needs {nbytes} bytes", offset=len(data))
        payload = data[offset : offset + nbytes]
        spare = nbytes * 8 - count * bits
        if spare and payload[-1] >> (8 - spare):
            raise FormatError("padding bits are not zero", offset=offset + nbytes - 1)
        blocks.append(QuantizedArray(bits, lo, hi, unpack_codes(payload, count, bits)))
        offset += nbytes
    if offset != len(data):
        raise FormatError(f"{len(data) - offset} trailing bytes after the last block", offset=offset)
    return CompressedCube(dims, ranks, fbits, cbits, tuple(blocks[:3]), blocks[3])
