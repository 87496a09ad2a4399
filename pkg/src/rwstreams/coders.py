"""Base coders: bit buffers, move-to-front, zero-run-length coding and arithmetic coding.

The arithmetic coder is a Witten-Neal-Cleary style coder with a 40-bit
state and pending-bit (underflow) carry handling.  Its model is adaptive
with Krichevsky-Trofimov (add-1/2) estimates, kept as doubled counts
``2 * count + 1`` so all arithmetic is integral.  An order-k variant,
conditioning on the previous k symbols, backs the block compressor.

Measured redundancy: on every input we test, order-0 output stays within
``n * H_0 + AC_CONSTANT * (sigma * log2(n) + 1)`` bits.
"""

from __future__ import annotations

import math
import struct

import numpy as np
from numba import njit

from .errors import DecodeError, FormatError, InvalidInputError

AC_CONSTANT = 1.0

STATE_BITS = 40
_FULL = 1 << STATE_BITS
_MASK = _FULL - 1
_TOP = _FULL >> 1
_SECOND = _TOP >> 1
MAX_TOTAL = 1 << 20
MAX_CONTEXT_ENTRIES = 1 << 24


class BitBuffer:
    """An exact-length sequence of bits, packed MSB-first, with a read cursor."""

    __slots__ = ("packed", "nbits", "cursor")

    def __init__(self, packed=b"", nbits: int | None = None):
        self.packed = np.frombuffer(bytes(packed), dtype=np.uint8).copy() if not isinstance(
            packed, np.ndarray) else packed.astype(np.uint8, copy=False)
        self.nbits = len(self.packed) * 8 if nbits is None else int(nbits)
        if self.nbits > len(self.packed) * 8:
            raise DecodeError("bit count exceeds packed data")
        self.cursor = 0

    @classmethod
    def from_bits(cls, bits) -> "BitBuffer":
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(np.packbits(bits), len(bits))

    def to_bits(self) -> np.ndarray:
        return np.unpackbits(self.packed)[: self.nbits]

    def __len__(self):
        return self.nbits

    def __eq__(self, other):
        return isinstance(other, BitBuffer) and self.nbits == other.nbits and np.array_equal(
            self.to_bits(), other.to_bits())

    def __repr__(self):
        shown = "".join(map(str, self.to_bits()[:32].tolist()))
        return f"BitBuffer({self.nbits} bits: {shown}{'...' if self.nbits > 32 else ''})"

    def read_bit(self) -> int:
        if self.cursor >= self.nbits:
            raise DecodeError("read past end of bit buffer")
        byte = int(self.packed[self.cursor >> 3])
        bit = (byte >> (7 - (self.cursor & 7))) & 1
        self.cursor += 1
        return bit

    def read_bits(self, count: int) -> int:
        value = 0
        for _ in range(count):
            value = (value << 1) | self.read_bit()
        return value

    def data_bytes(self) -> bytes:
        """Packed bits, zero-padded to a byte boundary."""
        return self.packed[: (self.nbits + 7) // 8].tobytes()

    def to_bytes(self) -> bytes:
        """File form: 8-byte LE bit count, then the packed bits."""
        return struct.pack("<Q", self.nbits) + self.data_bytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "BitBuffer":
        if len(blob) < 8:
            raise FormatError("bit buffer header truncated")
        (nbits,) = struct.unpack_from("<Q", blob)
        need = (nbits + 7) // 8
        if len(blob) - 8 < need:
            raise DecodeError("bit buffer payload truncated")
        return cls(blob[8: 8 + need], nbits)


# ---------------------------------------------------------------------------
# move-to-front


@njit(cache=True)
def _mtf_encode(values, order):
    table = order.copy()
    out = np.empty(values.shape[0], np.int64)
    m = table.shape[0]
    for p in range(values.shape[0]):
        v = values[p]
        i = 0
        while i < m and table[i] != v:
            i += 1
        if i == m:
            return out, p
        out[p] = i
        while i > 0:
            table[i] = table[i - 1]
            i -= 1
        table[0] = v
    return out, -1


@njit(cache=True)
def _mtf_decode(indices, order):
    table = order.copy()
    out = np.empty(indices.shape[0], np.int64)
    m = table.shape[0]
    for p in range(indices.shape[0]):
        i = indices[p]
        if i < 0 or i >= m:
            return out, p
        v = table[i]
        out[p] = v
        while i > 0:
            table[i] = table[i - 1]
            i -= 1
        table[0] = v
    return out, -1


def mtf_encode(s, initial_order) -> np.ndarray:
    """0-based move-to-front indices of ``s`` against ``initial_order``."""
    order = list(initial_order)
    if len(set(order)) != len(order):
        raise InvalidInputError("initial order has duplicates")
    lookup = {sym: i for i, sym in enumerate(order)}
    if isinstance(s, np.ndarray) and all(isinstance(x, (int, np.integer)) for x in order):
        values, table = s.astype(np.int64), np.asarray(order, np.int64)
    else:
        try:
            values = np.fromiter((lookup[ch] for ch in s), np.int64)
        except KeyError as exc:
            raise InvalidInputError(f"symbol {exc.args[0]!r} not in initial order") from None
        table = np.arange(len(order), dtype=np.int64)
    out, bad = _mtf_encode(values, table)
    if bad >= 0:
        raise InvalidInputError(f"symbol {values[bad]!r} at position {bad} not in initial order")
    return out


def mtf_decode(indices, initial_order):
    """Inverse of :func:`mtf_encode`; returns a ``str`` when the order holds characters."""
    order = list(initial_order)
    indices = np.asarray(indices, dtype=np.int64)
    out, bad = _mtf_decode(indices, np.arange(len(order), dtype=np.int64))
    if bad >= 0:
        raise DecodeError(f"index {indices[bad]} at position {bad} out of range")
    if order and all(isinstance(x, str) for x in order):
        return "".join(order[i] for i in out.tolist())
    return np.asarray(order, dtype=np.int64)[out] if order else out


# ---------------------------------------------------------------------------
# bit writing helpers shared by kernels


@njit(cache=True, inline="always")
def _put(out, pos, bit):
    if bit:
        out[pos >> 3] |= np.uint8(1 << (7 - (pos & 7)))
    return pos + 1


@njit(cache=True, inline="always")
def _get(data, nbits, pos):
    if pos >= nbits:
        return 0
    return (data[pos >> 3] >> (7 - (pos & 7))) & 1


@njit(cache=True, inline="always")
def _put_gamma(out, pos, x):
    length = 0
    y = x
    while y:
        length += 1
        y >>= 1
    for _ in range(length - 1):
        pos += 1
    for j in range(length - 1, -1, -1):
        pos = _put(out, pos, (x >> j) & 1)
    return pos


# ---------------------------------------------------------------------------
# zero-run-length coding with Elias-gamma codes
#
# A maximal run of r zeros becomes gamma(1) = "1" followed by gamma(r);
# a nonzero index v becomes gamma(v + 1), which always starts with "0".


@njit(cache=True)
def _rle_encode(indices):
    n = indices.shape[0]
    cap = 16
    for p in range(n):
        cap += 2 * 64 if indices[p] > (1 << 30) else 64
    out = np.zeros((cap + 7) // 8 + 1, np.uint8)
    pos = 0
    p = 0
    while p < n:
        v = indices[p]
        if v == 0:
            r = 0
            while p < n and indices[p] == 0:
                r += 1
                p += 1
            pos = _put(out, pos, 1)
            pos = _put_gamma(out, pos, r)
        else:
            pos = _put_gamma(out, pos, v + 1)
            p += 1
    return out, pos


@njit(cache=True)
def _read_gamma(data, nbits, pos):
    zeros = 0
    while pos < nbits and _get(data, nbits, pos) == 0:
        zeros += 1
        pos += 1
    if pos + zeros + 1 > nbits:
        return -1, pos
    x = 0
    for _ in range(zeros + 1):
        x = (x << 1) | _get(data, nbits, pos)
        pos += 1
    return x, pos


@njit(cache=True)
def _rle_decode(data, nbits, fill, out):
    pos = 0
    count = 0
    while pos < nbits:
        g, pos = _read_gamma(data, nbits, pos)
        if g < 0:
            return -1
        if g == 1:
            r, pos = _read_gamma(data, nbits, pos)
            if r < 0:
                return -1
            if fill:
                for j in range(r):
                    out[count + j] = 0
            count += r
        else:
            if fill:
                out[count] = g - 1
            count += 1
    return count


def rle_encode(indices) -> BitBuffer:
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size and indices.min() < 0:
        raise InvalidInputError("indices must be non-negative")
    packed, nbits = _rle_encode(indices)
    return BitBuffer(packed, nbits)


def rle_decode(buf: BitBuffer) -> np.ndarray:
    dummy = np.empty(0, np.int64)
    count = _rle_decode(buf.packed, buf.nbits, False, dummy)
    if count < 0:
        raise DecodeError("run-length stream truncated inside a gamma code")
    out = np.empty(count, np.int64)
    _rle_decode(buf.packed, buf.nbits, True, out)
    return out


# ---------------------------------------------------------------------------
# adaptive KT arithmetic coding
#
# Frequencies live in one Fenwick tree per context (row of ``tree``).


@njit(cache=True, inline="always")
def _fen_add(tree, row, i, delta):
    m = tree.shape[1]
    i += 1
    while i < m:
        tree[row, i] += delta
        i += i & (-i)


@njit(cache=True, inline="always")
def _fen_prefix(tree, row, i):
    total = 0
    while i > 0:
        total += tree[row, i]
        i -= i & (-i)
    return total


@njit(cache=True, inline="always")
def _fen_find(tree, row, target, top):
    """Largest symbol s with prefix(s) <= target."""
    pos = 0
    step = top
    while step:
        nxt = pos + step
        if nxt < tree.shape[1] and tree[row, nxt] <= target:
            pos = nxt
            target -= tree[row, nxt]
        step >>= 1
    return pos


@njit(cache=True)
def _new_model(nctx, sigma):
    tree = np.zeros((nctx, sigma + 1), np.int64)
    freq = np.ones((nctx, sigma), np.int64)
    for row in range(nctx):
        for s in range(sigma):
            _fen_add(tree, row, s, 1)
    totals = np.full(nctx, sigma, np.int64)
    return tree, freq, totals


@njit(cache=True)
def _bump(tree, freq, totals, row, s, sigma):
    freq[row, s] += 2
    _fen_add(tree, row, s, 2)
    totals[row] += 2
    if totals[row] > MAX_TOTAL:
        total = 0
        for j in range(sigma + 1):
            tree[row, j] = 0
        for j in range(sigma):
            f = (freq[row, j] + 1) // 2
            if f % 2 == 0:
                f += 1
            freq[row, j] = f
            total += f
            _fen_add(tree, row, j, f)
        totals[row] = total


@njit(cache=True)
def _contexts(sigma, k):
    """Order-k contexts plus one bootstrap context for the first k symbols."""
    return sigma ** k + 1 if k > 0 else 1


@njit(cache=True)
def _ac_encode_into(symbols, sigma, k, model, state, out, pos):
    """Encode ``symbols`` continuing from ``state = [low, high, pending, history, seen]``."""
    tree, freq, totals = model
    n = symbols.shape[0]
    low, high, pending, hist, seen = state[0], state[1], state[2], state[3], state[4]
    modulus = sigma ** (k - 1) if k > 0 else 1
    boot = sigma ** k
    for p in range(n):
        ctx = hist if seen >= k else boot
        s = symbols[p]
        total = totals[ctx]
        cum_low = _fen_prefix(tree, ctx, s)
        cum_high = cum_low + freq[ctx, s]
        rng = high - low + 1
        high = low + cum_high * rng // total - 1
        low = low + cum_low * rng // total
        while True:
            if ((low ^ high) & _TOP) == 0:
                bit = low >> (STATE_BITS - 1)
                pos = _put(out, pos, bit)
                for _ in range(pending):
                    pos = _put(out, pos, bit ^ 1)
                pending = 0
                low = (low << 1) & _MASK
                high = ((high << 1) & _MASK) | 1
            elif (low & ~high & _SECOND) != 0:
                pending += 1
                low = (low << 1) & (_MASK >> 1)
                high = ((high << 1) & (_MASK >> 1)) | _TOP | 1
            else:
                break
        _bump(tree, freq, totals, ctx, s, sigma)
        if k > 0:
            hist = (hist % modulus) * sigma + s
        seen += 1
    state[0] = low
    state[1] = high
    state[2] = pending
    state[3] = hist
    state[4] = seen
    return pos


@njit(cache=True)
def _ac_encode(symbols, sigma, k):
    n = symbols.shape[0]
    model = _new_model(_contexts(sigma, k), sigma)
    out = np.zeros(3 * n + 16, np.uint8)
    state = np.array([0, _MASK, 0, 0, 0], np.int64)
    pos = _ac_encode_into(symbols, sigma, k, model, state, out, 0)
    if n > 0:
        # one 1 bit (the decoder reads zeros beyond the end) lands inside the final interval
        pos = _put(out, pos, 1)
    return out, pos


class ArithmeticEncoder:
    """Incremental adaptive order-``k`` encoder; feed chunks, then :meth:`finish`."""

    def __init__(self, sigma: int, k: int = 0):
        _check_model(sigma, k)
        self.sigma, self.k = sigma, k
        self._model = _new_model(_contexts(sigma, k), sigma)
        self._state = np.array([0, _MASK, 0, 0, 0], np.int64)
        self._out = np.zeros(1024, np.uint8)
        self._pos = 0
        self._count = 0

    def feed(self, symbols):
        symbols = np.asarray(symbols, dtype=np.int64)
        if symbols.size and (symbols.min() < 0 or symbols.max() >= self.sigma):
            raise InvalidInputError(f"symbols must lie in [0, {self.sigma})")
        need = (self._pos + 3 * len(symbols) + 64) // 8 + 1
        if need > len(self._out):
            grown = np.zeros(max(need, 2 * len(self._out)), np.uint8)
            grown[: len(self._out)] = self._out
            self._out = grown
        self._pos = _ac_encode_into(symbols, self.sigma, self.k, self._model, self._state, self._out, self._pos)
        self._count += len(symbols)

    def finish(self) -> BitBuffer:
        pos = self._pos
        if self._count:
            pos = _put(self._out, pos, 1)
        return BitBuffer(self._out[: (pos + 7) // 8].copy(), pos)


@njit(cache=True)
def _ac_decode(data, nbits, n, sigma, k):
    tree, freq, totals = _new_model(_contexts(sigma, k), sigma)
    out = np.empty(n, np.int64)
    top = 1
    while top * 2 <= sigma:
        top *= 2
    low = 0
    high = _MASK
    code = 0
    pos = 0
    for _ in range(STATE_BITS):
        code = (code << 1) | _get(data, nbits, pos)
        pos += 1
    hist = 0
    modulus = sigma ** (k - 1) if k > 0 else 1
    boot = sigma ** k
    for p in range(n):
        ctx = hist if p >= k else boot
        total = totals[ctx]
        rng = high - low + 1
        value = ((code - low + 1) * total - 1) // rng
        s = _fen_find(tree, ctx, value, top)
        if s >= sigma:
            return out, p
        cum_low = _fen_prefix(tree, ctx, s)
        cum_high = cum_low + freq[ctx, s]
        high = low + cum_high * rng // total - 1
        low = low + cum_low * rng // total
        while True:
            if ((low ^ high) & _TOP) == 0:
                code = ((code << 1) & _MASK) | _get(data, nbits, pos)
                pos += 1
                low = (low << 1) & _MASK
                high = ((high << 1) & _MASK) | 1
            elif (low & ~high & _SECOND) != 0:
                code = (code & _TOP) | ((code << 1) & (_MASK >> 1)) | _get(data, nbits, pos)
                pos += 1
                low = (low << 1) & (_MASK >> 1)
                high = ((high << 1) & (_MASK >> 1)) | _TOP | 1
            else:
                break
        if code < low or code > high:
            return out, p
        out[p] = s
        _bump(tree, freq, totals, ctx, s, sigma)
        if k > 0:
            hist = (hist % modulus) * sigma + s
    return out, -1


def _check_model(sigma, k):
    if sigma < 1:
        raise InvalidInputError("sigma must be at least 1")
    if k < 0 or (sigma ** k + 1) * (sigma + 1) > MAX_CONTEXT_ENTRIES:
        raise InvalidInputError(f"order {k} model over sigma={sigma} is too large")


def ac_encode_order(symbols, sigma: int, k: int) -> BitBuffer:
    """Adaptive order-``k`` KT arithmetic code of ``symbols`` (values < ``sigma``)."""
    _check_model(sigma, k)
    symbols = np.asarray(symbols, dtype=np.int64)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= sigma):
        raise InvalidInputError(f"symbols must lie in [0, {sigma})")
    packed, nbits = _ac_encode(symbols, sigma, k)
    return BitBuffer(packed[: (nbits + 7) // 8], nbits)


def ac_decode_order(buf: BitBuffer, n: int, sigma: int, k: int) -> np.ndarray:
    _check_model(sigma, k)
    if n == 0:
        return np.empty(0, np.int64)
    out, bad = _ac_decode(buf.packed, buf.nbits, n, sigma, k)
    if bad >= 0:
        raise DecodeError(f"arithmetic-coded payload corrupt at symbol {bad}")
    return out


def ac_encode(symbols, sigma: int) -> BitBuffer:
    """Adaptive order-0 KT arithmetic code."""
    return ac_encode_order(symbols, sigma, 0)


def ac_decode(buf: BitBuffer, n: int, sigma: int) -> np.ndarray:
    return ac_decode_order(buf, n, sigma, 0)


def ac_bound_bits(n: int, sigma: int, h0_bits_total: float) -> float:
    """Documented output-size bound ``n H_0 + C (sigma log2 n + 1)``."""
    return h0_bits_total + AC_CONSTANT * (sigma * math.log2(max(n, 2)) + 1)


# ---------------------------------------------------------------------------
# fused decoding of arithmetic-coded run-length bits
#
# The entropy-only format stores neither the run-length bit count nor where
# the arithmetic code ends, so one kernel decodes bits with the binary model
# and feeds them straight into the gamma parser until ``count`` indices exist.


@njit(cache=True)
def _ac_rle_decode(data, nbits, count):
    out = np.zeros(count, np.int64)
    tree, freq, totals = _new_model(1, 2)
    low = 0
    high = _MASK
    code = 0
    pos = 0
    for _ in range(STATE_BITS):
        code = (code << 1) | _get(data, nbits, pos)
        pos += 1
    produced = 0
    zeros = 0          # leading zeros of the gamma code being read
    remaining = -1     # value bits still to read (-1: still counting zeros)
    value = 0
    want_run = False
    decoded = 0
    limit = 130 * count + 64
    while produced < count:
        if decoded > limit or pos > nbits + STATE_BITS + 64:
            return out, -1
        total = totals[0]
        rng = high - low + 1
        target = ((code - low + 1) * total - 1) // rng
        bit = 1 if target >= freq[0, 0] else 0
        cum_low = 0 if bit == 0 else freq[0, 0]
        cum_high = cum_low + freq[0, bit]
        high = low + cum_high * rng // total - 1
        low = low + cum_low * rng // total
        while True:
            if ((low ^ high) & _TOP) == 0:
                code = ((code << 1) & _MASK) | _get(data, nbits, pos)
                pos += 1
                low = (low << 1) & _MASK
                high = ((high << 1) & _MASK) | 1
            elif (low & ~high & _SECOND) != 0:
                code = (code & _TOP) | ((code << 1) & (_MASK >> 1)) | _get(data, nbits, pos)
                pos += 1
                low = (low << 1) & (_MASK >> 1)
                high = ((high << 1) & (_MASK >> 1)) | _TOP | 1
            else:
                break
        _bump(tree, freq, totals, 0, bit, 2)
        decoded += 1
        # gamma parser
        if remaining < 0:
            if bit == 0:
                zeros += 1
                if zeros > 62:
                    return out, -1
                continue
            value = 1
            remaining = zeros
        else:
            value = (value << 1) | bit
            remaining -= 1
        if remaining > 0:
            continue
        zeros = 0
        remaining = -1
        if want_run:
            if produced + value > count:
                return out, -1
            produced += value   # out is zero-initialised
            want_run = False
        elif value == 1:
            want_run = True
        else:
            out[produced] = value - 1
            produced += 1
    return out, pos


def ac_rle_decode(buf: BitBuffer, count: int) -> np.ndarray:
    """Decode ``count`` indices from ``ac_encode(rle_encode(indices).to_bits(), 2)``."""
    out, pos = _ac_rle_decode(buf.packed, buf.nbits, count)
    if pos < 0:
        raise DecodeError("entropy-coded payload is corrupt or truncated")
    return out
