"""One-pass block compression with per-block order selection.

The input tape is read once, block by block.  Each block is coded with an
adaptive order-``k`` KT arithmetic coder for every ``k`` up to ``k_max`` and
the shortest result is kept (ties go to the smaller ``k``).

Container layout (little-endian)::

    "RWS1" | version:1 | n:8 | sigma:2 | c:4 | blocks:4 |
    per block: k:1 | payload bits:4 | payload, MSB-first, byte padded

When the length was unknown up front the top bit of ``c`` is set and block
sizes double after every ``sigma`` blocks, starting from ``c``.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from .alphabet import bits_for, restore, to_symbols
from .coders import BitBuffer, ac_decode_order, ac_encode_order
from .errors import DecodeError, FormatError, InvalidInputError
from .stream_machine import StreamMachine

MAGIC = b"RWS1"
VERSION = 1
UNKNOWN_LENGTH_BLOCK = 4096
GROWTH_FLAG = 1 << 31
# 1-byte order + 4-byte bit length + at most 7 padding bits
HEADER_BITS_PER_BLOCK = 47

_HEAD = struct.Struct("<4sBQHII")
_BLOCK = struct.Struct("<BI")


@dataclass
class CompressedContainer:
    n: int
    sigma: int
    block_size: int
    blocks: list = field(default_factory=list)  # (k, nbits, payload bytes)
    growth: bool = False
    magic: bytes = MAGIC
    version: int = VERSION

    def block_lengths(self):
        return list(_block_lengths(self.n, self.block_size, self.sigma, self.growth))

    def payload_bits(self) -> int:
        return sum(nbits for _, nbits, _ in self.blocks)

    def to_bytes(self) -> bytes:
        c = self.block_size | (GROWTH_FLAG if self.growth else 0)
        parts = [_HEAD.pack(self.magic, self.version, self.n, self.sigma, c, len(self.blocks))]
        for k, nbits, payload in self.blocks:
            parts.append(_BLOCK.pack(k, nbits))
            parts.append(payload)
        return b"".join(parts)

    @classmethod
    def from_bytes(cls, blob: bytes) -> "CompressedContainer":
        if len(blob) < 4 or blob[:4] != MAGIC:
            raise FormatError(f"bad magic {bytes(blob[:4])!r}")
        if len(blob) < _HEAD.size:
            raise FormatError("container header truncated")
        magic, version, n, sigma, c, count = _HEAD.unpack_from(blob)
        if version != VERSION:
            raise FormatError(f"unsupported container version {version}")
        growth = bool(c & GROWTH_FLAG)
        c &= GROWTH_FLAG - 1
        if sigma < 1 or (n and c < 1):
            raise FormatError("header fields out of range")
        pos = _HEAD.size
        blocks = []
        for i in range(count):
            if pos + _BLOCK.size > len(blob):
                raise DecodeError(f"block {i}: header truncated")
            k, nbits = _BLOCK.unpack_from(blob, pos)
            pos += _BLOCK.size
            size = (nbits + 7) // 8
            if pos + size > len(blob):
                raise DecodeError(f"block {i}: payload truncated ({len(blob) - pos} of {size} bytes)")
            blocks.append((k, nbits, bytes(blob[pos:pos + size])))
            pos += size
        if pos != len(blob):
            raise FormatError(f"{len(blob) - pos} trailing bytes after the last block")
        return cls(n, sigma, c, blocks, growth, magic, version)


def _block_lengths(n, c, sigma, growth):
    done = 0
    i = 0
    while done < n:
        size = c << (i // sigma) if growth else c
        size = min(size, n - done)
        yield size
        done += size
        i += 1


def default_block_size(n: int) -> int:
    """``ceil(log2 n) ** 2`` symbols (at least 1)."""
    return max(1, math.ceil(math.log2(n)) ** 2) if n > 1 else 1


def max_order(sigma: int, c: int) -> int:
    """Largest ``k`` with ``sigma ** k <= c``."""
    if sigma < 2:
        return 0
    k = 0
    while sigma ** (k + 1) <= c:
        k += 1
    return k


def model_bits(sigma: int, k: int, c: int) -> int:
    """Declared size of a sparse order-``k`` model for one block of ``c`` symbols.

    One keyed counter per (context, symbol) pair seen, plus one total per
    context seen; a block of ``c`` symbols sees at most ``c`` of each.
    """
    sym, count = bits_for(sigma), bits_for(c + 1)
    pairs = min(sigma ** (k + 1), c)
    contexts = min(sigma ** k, c)
    return pairs * ((k + 1) * sym + count) + contexts * (k * sym + count)


def working_bits(sigma: int, k: int, c: int) -> int:
    return c * bits_for(sigma) + model_bits(sigma, k, c) + 2 * 64


def choose_order(block, k_max: int, sigma: int | None = None):
    """Code ``block`` at every order ``0 .. k_max``; return ``(k, BitBuffer)`` of the shortest."""
    sym = to_symbols(block, sigma)
    values, sigma = sym.values, sym.sigma
    best = None
    for k in range(k_max + 1):
        buf = ac_encode_order(values, sigma, k)
        if best is None or len(buf) < len(best[1]):
            best = (k, buf)
    return best


def _pick_k_max(budget_bits, sigma, c):
    k = max_order(sigma, c)
    while k > 0 and working_bits(sigma, k, c) > budget_bits:
        k -= 1
    return k


def compress(machine: StreamMachine, s, block_size: int | None = None, k_max: int | None = None,
             sigma: int | None = None, length_known: bool = True) -> CompressedContainer:
    """Compress ``s`` in one pass over a single input tape.

    ``block_size`` defaults to ``ceil(log2 n)**2``, or to 4096 with doubling
    every ``sigma`` blocks when ``length_known`` is false.  ``k_max``
    defaults to the largest order whose model fits the machine budget.
    """
    sym = to_symbols(s, sigma)
    sigma = sym.sigma
    n = len(sym)
    growth = False
    if block_size is None:
        if length_known:
            block_size = default_block_size(n)
        else:
            block_size, growth = UNKNOWN_LENGTH_BLOCK, True
    if block_size < 1 or block_size >= GROWTH_FLAG:
        raise InvalidInputError("block size must be in [1, 2**31)")
    largest = max(_block_lengths(n, block_size, sigma, growth), default=block_size)
    if k_max is None:
        k_max = _pick_k_max(machine.budget.memory_bits, sigma, min(largest, block_size))
    if k_max < 0 or k_max > max_order(sigma, block_size) or k_max > 255:
        raise InvalidInputError(f"k_max must be in [0, {max_order(sigma, block_size)}] for block size {block_size}")
    machine.declare_memory(working_bits(sigma, k_max, largest))

    if machine.streams:
        tape = machine.streams[0]
        if tape.head or tape.direction != 1:
            tape.rewind()
        tape.load(sym.values, bits_for(sigma))
    else:
        tape = machine.attach_stream(sym.values, bits_for(sigma))
    container = CompressedContainer(n, sigma, block_size, growth=growth)
    for size in _block_lengths(n, block_size, sigma, growth):
        block = tape.read_block(size)
        k, buf = choose_order(block, min(k_max, max_order(sigma, max(size, 1))), sigma)
        container.blocks.append((k, buf.nbits, buf.data_bytes()))
    tape.rewind()
    machine.declare_memory(0)
    return container


def decompress(container, machine: StreamMachine | None = None, kind: str = "ints", alphabet=None):
    """Decode a container (object or bytes).  With a machine, the bytes are read from one tape."""
    if isinstance(container, (bytes, bytearray, memoryview)):
        blob = bytes(container)
        container = CompressedContainer.from_bytes(blob)
    else:
        blob = None
    if machine is not None:
        blob = container.to_bytes() if blob is None else blob
        tape = machine.attach_stream(np.frombuffer(blob, np.uint8), 8) if not machine.streams else machine.streams[0]
        tape.load(np.frombuffer(blob, np.uint8), 8)
        tape.read_all()
    if container.magic != MAGIC or container.version != VERSION:
        raise FormatError("bad magic or version")
    lengths = container.block_lengths()
    if len(lengths) != len(container.blocks):
        raise FormatError(f"header promises {len(lengths)} blocks, container holds {len(container.blocks)}")
    out = np.empty(container.n, np.int64)
    pos = 0
    for i, ((k, nbits, payload), size) in enumerate(zip(container.blocks, lengths)):
        if machine is not None:
            machine.declare_memory(working_bits(container.sigma, k, size))
        if len(payload) * 8 < nbits:
            raise DecodeError(f"block {i}: payload truncated")
        if k > max_order(container.sigma, max(size, 1)):
            raise DecodeError(f"block {i}: order {k} too large for its size")
        try:
            out[pos:pos + size] = ac_decode_order(BitBuffer(payload, nbits), size, container.sigma, k)
        except (DecodeError, InvalidInputError) as exc:
            raise DecodeError(f"block {i}: {exc}") from None
        pos += size
    return restore(out, kind, alphabet)
