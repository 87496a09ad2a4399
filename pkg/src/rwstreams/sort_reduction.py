"""Sorting ``n`` numbers of ``2 log n`` bits by computing one BWT.

Each bit ``x_i[j]`` becomes the phrase ``x_i[j] 2 x_i i j`` over ``{0,1,2}``,
with ``x_i`` in ``2 log n`` bits, ``i - 1`` in ``log n`` bits and ``j - 1``
in ``log log n + 1`` bits, all MSB-first.  Only phrase-leading bits precede
a ``2``, and suffixes starting with ``2`` sort last, ordered by
``(x_i, i, j)``.  So the final ``2 n log n`` BWT symbols spell the sorted
values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alphabet import to_symbols
from .bwt_pipeline import bwt_forward
from .errors import InvalidInputError
from .stream_machine import StreamMachine


@dataclass(frozen=True)
class SortInstance:
    n: int
    values: tuple

    def __post_init__(self):
        n = self.n
        if n < 2 or n & (n - 1):
            raise InvalidInputError(f"n must be a power of two >= 2, got {n}")
        if len(self.values) != n:
            raise InvalidInputError(f"expected {n} values, got {len(self.values)}")
        limit = 1 << value_bits(n)
        if any(v < 0 or v >= limit for v in self.values):
            raise InvalidInputError(f"values must lie in [0, {limit})")

    @classmethod
    def padded(cls, values) -> tuple["SortInstance", int]:
        """Pad to a power of two with the largest allowed value; returns the instance and the pad count."""
        values = [int(v) for v in values]
        n = 2
        while n < len(values) or (values and max(values) >= 1 << value_bits(n)):
            n *= 2
        pad = n - len(values)
        top = (1 << value_bits(n)) - 1
        return cls(n, tuple(values + [top] * pad)), pad


def log2n(n: int) -> int:
    return n.bit_length() - 1


def value_bits(n: int) -> int:
    return 2 * log2n(n)


def index_bits(n: int) -> int:
    return log2n(n)


def position_bits(n: int) -> int:
    """``log log n + 1`` bits, enough for ``j - 1 < 2 log n``."""
    return max(1, math.ceil(math.log2(value_bits(n))))


def phrase_length(n: int) -> int:
    return 2 + value_bits(n) + index_bits(n) + position_bits(n)


def encoded_length(n: int) -> int:
    return n * value_bits(n) * phrase_length(n)


def formula_length(n: int) -> float:
    """``2 n log n (3 log n + log log n + 2)`` evaluated literally (not integral when log n is odd)."""
    lg = log2n(n)
    return 2 * n * lg * (3 * lg + math.log2(lg) + 2)


def _bits(values, width):
    v = np.asarray(values, dtype=np.int64)
    return (v[..., None] >> np.arange(width - 1, -1, -1)) & 1


def encode_instance(inst: SortInstance) -> np.ndarray:
    """The ternary string as an int array over ``{0, 1, 2}``."""
    n = inst.n
    vb, ib, pb = value_bits(n), index_bits(n), position_bits(n)
    x = np.asarray(inst.values, dtype=np.int64)
    xbits = _bits(x, vb)                                      # (n, vb)
    i_bits = _bits(np.arange(n), ib)                          # (n, ib)
    j_bits = _bits(np.arange(vb), pb)                         # (vb, pb)
    shape = (n, vb)
    phrase = np.concatenate([
        xbits[:, :, None],
        np.full(shape + (1,), 2, np.int64),
        np.broadcast_to(xbits[:, None, :], shape + (vb,)),
        np.broadcast_to(i_bits[:, None, :], shape + (ib,)),
        np.broadcast_to(j_bits[None, :, :], shape + (pb,)),
    ], axis=2)
    return phrase.reshape(-1)


def decode_sorted(tail, n: int) -> list:
    """Split ``2 n log n`` bits into ``n`` MSB-first words."""
    if isinstance(tail, str):
        tail = [int(c) for c in tail if not c.isspace()]
    bits = np.asarray(tail, dtype=np.int64)
    vb = value_bits(n)
    if bits.shape != (n * vb,):
        raise InvalidInputError(f"tail must hold {n * vb} bits, got {bits.size}")
    if ((bits != 0) & (bits != 1)).any():
        raise InvalidInputError("tail must be binary")
    words = bits.reshape(n, vb)
    return (words * (1 << np.arange(vb - 1, -1, -1))).sum(axis=1).tolist()


def sort_via_bwt(machine: StreamMachine, inst: SortInstance) -> list:
    s = encode_instance(inst)
    bwt = bwt_forward(machine, to_symbols(s, 3)).symbols
    return decode_sorted(bwt[len(bwt) - inst.n * value_bits(inst.n):], inst.n)


def sort_numbers(machine: StreamMachine, values) -> list:
    """Sort arbitrary non-negative integers by padding to a valid instance first."""
    if not values:
        return []
    inst, pad = SortInstance.padded(values)
    out = sort_via_bwt(machine, inst)
    return out[: len(out) - pad]
