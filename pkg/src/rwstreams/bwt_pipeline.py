"""Burrows-Wheeler transform on two read/write streams.

Forward transform: prefix doubling where every round re-ranks suffixes by
sorting packed ``(rank, rank at +h, index)`` records with the two-stream
merge sort.  Each index record also carries the character preceding its
suffix, so once all ranks are distinct the sorted tape already holds the
transform.

Inverse: the character at row ``i`` of the transform is followed in the
text by the ``i``-th smallest character (ties by position), which defines a
permutation; ranking that permutation from the sentinel's row by pointer
doubling (again only sorts and sequential sweeps) spells out the text.

Internally the sentinel is code 0 and symbol ``c`` is code ``c + 1``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np
from numba import njit

from .alphabet import Symbols, bits_for, restore, to_symbols
from .coders import STATE_BITS, ArithmeticEncoder, BitBuffer, _mtf_decode, _mtf_encode, ac_rle_decode, rle_encode
from .errors import DecodeError, FormatError, InvalidInputError
from .stream_machine import StreamMachine, two_stream_merge_sort, two_streams

SENTINEL = "$"


@dataclass
class BwtString:
    """Transform of ``s + '$'``; ``symbols`` uses the value ``sigma`` for the sentinel."""

    symbols: np.ndarray
    sigma: int
    alphabet: tuple | None = None
    kind: str = "ints"

    def __len__(self):
        return len(self.symbols)

    @property
    def text(self) -> str:
        if self.alphabet is None:
            raise InvalidInputError("transform has no character alphabet")
        chars = dict(enumerate(self.alphabet))
        chars[self.sigma] = SENTINEL
        return "".join(chars[v] for v in self.symbols.tolist())

    def __eq__(self, other):
        if isinstance(other, str):
            return self.alphabet is not None and self.text == other
        return (isinstance(other, BwtString) and self.sigma == other.sigma
                and np.array_equal(self.symbols, other.symbols))

    @classmethod
    def from_text(cls, text: str, alphabet=None) -> "BwtString":
        if alphabet is None:
            alphabet = tuple(sorted(set(text) - {SENTINEL}))
        index = {ch: i for i, ch in enumerate(alphabet)}
        index[SENTINEL] = len(alphabet)
        try:
            values = np.fromiter((index[ch] for ch in text), np.int64, len(text))
        except KeyError as exc:
            raise InvalidInputError(f"character {exc.args[0]!r} not in alphabet") from None
        return cls(values, len(alphabet), tuple(alphabet), "str")

    def codes(self) -> np.ndarray:
        """Internal codes: sentinel 0, symbol c as c + 1."""
        return np.where(self.symbols == self.sigma, 0, self.symbols + 1)

    @classmethod
    def from_codes(cls, codes, sym: Symbols) -> "BwtString":
        codes = np.asarray(codes, dtype=np.int64)
        return cls(np.where(codes == 0, sym.sigma, codes - 1), sym.sigma, sym.alphabet, sym.kind)


def _coerce_bwt(t) -> BwtString:
    if isinstance(t, BwtString):
        return t
    if isinstance(t, str):
        return BwtString.from_text(t)
    raise InvalidInputError("expected a BwtString or a str containing '$'")


def _text_codes(s):
    sym = to_symbols(s)
    return sym, np.append(sym.values + 1, 0)


def _other(a, b, x):
    return b if x is a else a


def _key0(records):
    return records[:, 0]


# ---------------------------------------------------------------------------
# suffix sorting by prefix doubling
#
# The routines below accept a batch of texts laid end to end on the tapes.
# Every record carries its text id in the high bits, so texts never compare
# against each other; a batch of one is the ordinary single-text algorithm.


def _layout(lengths):
    lengths = np.asarray(lengths, dtype=np.int64)
    tid = np.repeat(np.arange(len(lengths), dtype=np.int64), lengths)
    offsets = np.concatenate(([0], np.cumsum(lengths)[:-1]))
    local = np.arange(int(lengths.sum()), dtype=np.int64) - np.repeat(offsets, lengths)
    return tid, local, (bits_for(len(lengths)) if len(lengths) > 1 else 0)


def _group_starts(tid):
    """Boolean mask of records that open a new text (``tid`` in tape order)."""
    first = np.ones(len(tid), bool)
    first[1:] = tid[1:] != tid[:-1]
    return first


def _suffix_sort(machine: StreamMachine, codes: np.ndarray, lengths, sigma: int, level_hook=None):
    """Leave records ``[(tid << 2w) | (index << w) | rank, preceding code]`` in suffix order.

    ``codes`` holds every text (each ending in the sentinel 0) back to back.
    ``level_hook(tape, other, h, w)``, if given, runs at the start of every
    round while ``tape`` holds the ranks of length-``h`` prefixes in text order.
    Returns ``(tape, w)``.
    """
    total = len(codes)
    tid, local, tb = _layout(lengths)
    longest = int(np.max(lengths))
    cb = bits_for(sigma + 1)
    w = max(bits_for(longest), cb)
    if tb + 3 * w > 63:
        raise InvalidInputError(f"text of length {longest - 1} is too long for packed 63-bit records")
    mask = (1 << w) - 1
    a, b = two_streams(machine, codes, cb)
    machine.declare_memory(cb + w)
    # the code before each text's first suffix is its own sentinel, which np.roll supplies
    a.sweep(lambda d: np.column_stack(((tid << 2 * w) | (local << w) | d, np.roll(d, 1))),
            record_bits=tb + 2 * w + cb)
    cur = a
    h = 1
    while True:
        other = _other(a, b, cur)
        if level_hook is not None:
            level_hook(cur, other, h, w)
        other.write_all(cur.read_all(), cur.record_bits)
        machine.declare_memory(2 * (tb + 2 * w + cb))
        ahead = other.read_all(start=h)[:, 0]

        def triples(d, ahead=ahead, h=h):
            second = np.zeros(total, np.int64)
            n_ahead = max(total - h, 0)
            same = (ahead >> 2 * w) == (d[:n_ahead, 0] >> 2 * w)
            second[:n_ahead] = np.where(same, ahead & mask, 0)
            key = d[:, 0]
            return np.column_stack((((key >> 2 * w) << 3 * w) | ((key & mask) << 2 * w) | (second << w)
                                    | ((key >> w) & mask), d[:, 1]))

        cur.sweep(triples, record_bits=tb + 3 * w + cb)
        cur = two_stream_merge_sort(machine, cur, other, key=_key0)
        other = _other(a, b, cur)

        machine.declare_memory(2 * (tb + 3 * w + cb) + w)
        distinct = []

        def rerank(d):
            pairs = d[:, 0] >> w
            change = np.zeros(total, np.int64)
            change[1:] = pairs[1:] != pairs[:-1]
            counts = np.cumsum(change)
            owner = np.maximum.accumulate(np.where(_group_starts(d[:, 0] >> 3 * w), np.arange(total), 0))
            ranks = counts - counts[owner]
            distinct.append(int(counts[-1]) + 1)
            text = d[:, 0] >> 3 * w
            return np.column_stack(((text << 2 * w) | ((d[:, 0] & mask) << w) | ranks, d[:, 1]))

        cur.sweep(rerank, record_bits=tb + 2 * w + cb)
        if distinct[0] == total or h >= longest:
            return cur, w
        cur = two_stream_merge_sort(machine, cur, other, key=_key0)
        h *= 2


def _batch_codes(texts):
    syms = [to_symbols(s) for s in texts]
    lengths = np.array([len(s) + 1 for s in syms], dtype=np.int64)
    codes = np.zeros(int(lengths.sum()), np.int64)
    ends = np.cumsum(lengths)
    for sym, end, m in zip(syms, ends.tolist(), lengths.tolist()):
        codes[end - m: end - 1] = sym.values + 1
    sigma = max((s.sigma for s in syms), default=1)
    return syms, codes, lengths, sigma


def suffix_array_streams(machine: StreamMachine, s) -> np.ndarray:
    """0-based suffix array of ``s + '$'`` (the sentinel is appended here)."""
    sym, codes = _text_codes(s)
    tape, w = _suffix_sort(machine, codes, [len(codes)], sym.sigma)
    return (tape.read_all()[:, 0] >> w) & ((1 << w) - 1)


def bwt_forward_many(machine: StreamMachine, texts) -> list:
    """Transforms of several texts computed together on one pair of tapes."""
    texts = list(texts)
    if not texts:
        return []
    syms, codes, lengths, sigma = _batch_codes(texts)
    tape, _ = _suffix_sort(machine, codes, lengths, sigma)
    out = tape.read_all()[:, 1]
    pieces = np.split(out, np.cumsum(lengths)[:-1])
    return [BwtString.from_codes(p, sym) for p, sym in zip(pieces, syms)]


def bwt_forward(machine: StreamMachine, s) -> BwtString:
    return bwt_forward_many(machine, [s])[0]


# ---------------------------------------------------------------------------
# permutation ranking by pointer doubling


def _rank_orbit(machine, a, b, cur, nodes, w, payload_bits, longest):
    """Rank the permutations on ``cur``: records ``[pi(x), payload]`` in node order.

    A node is ``(tid << w) | local``; each text's orbit starts at its local
    node 0 and pointer jumps stop there.  Returns ``(tape, lengths)``: the
    tape holds ``[(tid << 2w) | (position << w) | local, payload]`` for the
    nodes on each orbit in orbit order, and ``lengths`` the cycle length of
    every text (a cycle shorter than its text leaves nodes off the tape).
    """
    mask = (1 << w) - 1
    total = len(nodes)
    nb = int(nodes[-1]).bit_length() if total else 1
    table_bits = 2 * nb + w + payload_bits
    machine.declare_memory(nb + payload_bits)
    # table records: [x, jump, distance, payload]
    cur.sweep(lambda d: np.column_stack((nodes, d[:, 0], np.ones(total, np.int64), d[:, 1])),
              record_bits=table_bits)
    first = True
    steps = 1
    while True:
        other = _other(a, b, cur)
        machine.declare_memory(2 * table_bits)

        def requests(d):
            out = np.empty((2 * total, 4), np.int64)
            out[0::2, 0] = d[:, 0] << 1           # table entry for node x
            out[0::2, 1:] = d[:, 1:]
            out[1::2, 0] = (d[:, 1] << 1) | 1     # query: x needs the entry of jump(x)
            out[1::2, 1] = d[:, 0]
            out[1::2, 2] = d[:, 2]
            out[1::2, 3] = d[:, 3]
            return out

        other.write_all(requests(cur.read_all()), 2 * nb + 1 + w + payload_bits)
        cur = two_stream_merge_sort(machine, other, cur, key=_key0)
        other = _other(a, b, cur)

        reached = []

        def answer(d, check=first):
            if check and not (np.array_equal(d[0::2, 0], nodes << 1) and np.array_equal(d[1::2, 0], (nodes << 1) | 1)):
                raise InvalidInputError("mapping is not a permutation")
            is_table = (d[:, 0] & 1) == 0
            owner = np.maximum.accumulate(np.where(is_table, np.arange(len(d)), 0))
            q = ~is_table
            node = d[q, 0] >> 1
            entry = d[owner[q]]
            stop = (node & mask) == 0
            jump = np.where(stop, node, entry[:, 1])
            dist = np.where(stop, d[q, 2], d[q, 2] + entry[:, 2])
            reached.append(int(np.count_nonzero((jump & mask) == 0)))
            return np.column_stack((d[q, 1], jump, dist, d[q, 3]))

        machine.declare_memory(2 * table_bits + nb)
        cur.sweep(answer, record_bits=table_bits)
        first = False
        cur = two_stream_merge_sort(machine, cur, other, key=_key0)
        steps *= 2
        if reached[0] == total or steps >= longest:
            break

    # every text's start node comes first in node order and holds its cycle length
    other = _other(a, b, cur)
    machine.declare_memory(table_bits + 2 * w + nb)
    lengths = []

    def positions(d):
        text = d[:, 0] >> w
        owner = np.maximum.accumulate(np.where(_group_starts(text), np.arange(len(d)), 0))
        closed = (d[owner, 1] & mask) == 0
        length = np.where(closed, d[owner, 2], 0)
        lengths.append(length[_group_starts(text)])
        on = ((d[:, 1] & mask) == 0) & (length > 0)
        pos = (length[on] - d[on, 2]) % length[on]
        return np.column_stack(((text[on] << 2 * w) | (pos << w) | (d[on, 0] & mask), d[on, 3]))

    cur.sweep(positions, record_bits=nb + 2 * w + payload_bits)
    cur = two_stream_merge_sort(machine, cur, other, key=_key0)
    return cur, lengths[0]


def _fill_orbit(machine, a, b, cur, m, w, payload_bits, length):
    """Extend a single orbit of ``length < m`` nodes periodically to ``m`` entries."""
    mask = (1 << w) - 1
    other = _other(a, b, cur)
    idx = np.arange(m, dtype=np.int64)
    machine.declare_memory(2 * (2 * w + 1 + payload_bits))
    table = cur.read_all()
    queries = np.column_stack((((idx % length) << (w + 1)) | (1 << w) | idx, np.zeros(m, np.int64)))
    tagged = np.column_stack((((table[:, 0] >> w) << (w + 1)) | (table[:, 0] & mask), table[:, 1]))
    other.write_all(np.concatenate((tagged, queries)), 3 * w + 1 + payload_bits)
    cur = two_stream_merge_sort(machine, other, cur, key=_key0)
    other = _other(a, b, cur)

    def fill(d):
        is_table = ((d[:, 0] >> w) & 1) == 0
        owner = np.maximum.accumulate(np.where(is_table, np.arange(len(d)), 0))
        q = ~is_table
        node = d[owner[q], 0] & mask
        return np.column_stack((((d[q, 0] & mask) << w) | node, d[owner[q], 1]))

    cur.sweep(fill, record_bits=2 * w + payload_bits)
    return two_stream_merge_sort(machine, cur, other, key=_key0)


def rank_permutation(machine: StreamMachine, pi) -> np.ndarray:
    """The orbit ``pi^0(0), pi^1(0), ..., pi^(len(pi)-1)(0)`` of a 0-based permutation."""
    pi = np.asarray(pi, dtype=np.int64)
    m = len(pi)
    if m == 0:
        return pi
    if pi.min() < 0 or pi.max() >= m:
        raise InvalidInputError("mapping is not a permutation of 0 .. n")
    w = bits_for(m)
    nodes = np.arange(m, dtype=np.int64)
    a, b = two_streams(machine, np.column_stack((pi, np.zeros(m, np.int64))), w)
    tape, lengths = _rank_orbit(machine, a, b, a, nodes, w, 1, m)
    length = int(lengths[0])
    if length < m:
        tape = _fill_orbit(machine, a, b, tape, m, w, 1, length)
    return tape.read_all()[:, 0] & ((1 << w) - 1)


def bwt_inverse_many(machine: StreamMachine, transforms) -> list:
    """Invert several transforms together; raises :class:`InvalidInputError` naming a non-image."""
    ts = [_coerce_bwt(t) for t in transforms]
    if not ts:
        return []
    parts = [t.codes() for t in ts]
    lengths = np.array([len(c) for c in parts], dtype=np.int64)
    for i, c in enumerate(parts):
        if len(c) == 0 or np.count_nonzero(c == 0) != 1:
            raise InvalidInputError(f"transform {i} must contain exactly one sentinel")
    codes = np.concatenate(parts)
    total = len(codes)
    tid, local, tb = _layout(lengths)
    longest = int(lengths.max())
    cb = bits_for(max(t.sigma for t in ts) + 1)
    w = max(bits_for(longest), 1)
    if tb + cb + w > 63 or 2 * (tb + w) + 1 > 63:
        raise InvalidInputError("batch too large for packed 63-bit records")
    mask = (1 << w) - 1
    a, b = two_streams(machine, codes, cb)
    machine.declare_memory(tb + cb + w)
    # sort (text, code, position): row i then holds pi(i) and the i-th smallest code
    a.sweep(lambda d: (tid << (cb + w)) | (d << w) | local, record_bits=tb + cb + w)
    cur = two_stream_merge_sort(machine, a, b)
    cmask = (1 << cb) - 1
    nodes = (tid << w) | local
    cur.sweep(lambda d: np.column_stack(((d >> (cb + w)) << w | (d & mask), (d >> w) & cmask)),
              record_bits=tb + w + cb)
    tape, cycle = _rank_orbit(machine, a, b, cur, nodes, w, cb, longest)
    bad = np.flatnonzero(cycle != lengths)
    if len(bad):
        i = int(bad[0])
        raise InvalidInputError(
            f"transform {i} is not a valid image: the induced permutation has a cycle of {int(cycle[i])} < {int(lengths[i])}")
    # each orbit's payload spells "$" followed by the text; rotate the sentinel to the end
    data = tape.read_all()
    other = _other(a, b, tape)
    starts = np.cumsum(lengths) - lengths
    rotated = np.where(local == lengths[tid] - 1, starts[tid], np.arange(total) + 1)
    other.write_all(data[rotated, 1], cb)
    text = other.read_all()
    ends = np.cumsum(lengths)
    return [restore(text[e - m: e - 1] - 1, t.kind, t.alphabet) for t, e, m in zip(ts, ends.tolist(), lengths.tolist())]


def bwt_inverse(machine: StreamMachine, t):
    """Recover ``s`` from its transform; raises :class:`InvalidInputError` on non-images."""
    return bwt_inverse_many(machine, [t])[0]


# ---------------------------------------------------------------------------
# entropy-only compression: BWT, move-to-front, zero-run coding, arithmetic coding
#
# Inputs longer than SEGMENT symbols are cut into SEGMENT-symbol pieces that
# are transformed independently; all pieces share one arithmetic-coded stream.

SEGMENT = 1 << 20
EO_MAGIC = b"RWSE"
EO_VERSION = 1
_EO_HEADER = struct.Struct("<4sBQH")


def _segments(n: int):
    count = max(1, -(-n // SEGMENT))
    return [(i * SEGMENT, min(n, (i + 1) * SEGMENT)) for i in range(count)]


def entropy_only_compress(machine: StreamMachine, s) -> BitBuffer:
    """Compress ``s``; the payload alone (see :func:`pack_entropy_only` for the file form)."""
    sym = to_symbols(s)
    sigma = sym.sigma
    cb = bits_for(sigma + 1)
    order = np.arange(sigma + 1, dtype=np.int64)
    encoder = ArithmeticEncoder(2)
    for lo, hi in _segments(len(sym)):
        codes = np.append(sym.values[lo:hi] + 1, 0)
        tape, _ = _suffix_sort(machine, codes, [len(codes)], sigma)
        other = _other(*machine.streams[:2], tape)
        machine.declare_memory((sigma + 1) * cb + cb)

        def mtf(d):
            out, _ = _mtf_encode(d[:, 1], order)
            return out

        tape.sweep(mtf, record_bits=cb)
        machine.declare_memory(2 * bits_for(len(codes) + 1) + 2)
        other.write_all(rle_encode(tape.read_all()).to_bits(), 1)
        machine.declare_memory(4 * STATE_BITS + 2 * 21)
        encoder.feed(other.read_all())
    return encoder.finish()


def entropy_only_decompress(machine: StreamMachine, buf: BitBuffer, n: int, sigma: int,
                            alphabet=None, kind: str = "ints"):
    """Inverse of :func:`entropy_only_compress` given the original length and alphabet size."""
    if n < 0 or sigma < 1:
        raise InvalidInputError("length must be non-negative and sigma positive")
    segments = _segments(n)
    indices = ac_rle_decode(buf, n + len(segments))
    order = np.arange(sigma + 1, dtype=np.int64)
    pieces = []
    start = 0
    for lo, hi in segments:
        m = hi - lo + 1
        a, b = two_streams(machine, indices[start:start + m], bits_for(sigma + 1))
        start += m
        machine.declare_memory((sigma + 1) * bits_for(sigma + 1))
        bad = []

        def unmtf(d):
            out, at = _mtf_decode(d, order)
            bad.append(at)
            return out

        a.sweep(unmtf)
        if bad[0] >= 0:
            raise DecodeError(f"move-to-front index out of range in segment {len(pieces)}")
        codes = a.read_all()
        if codes.max() > sigma:
            raise DecodeError("decoded symbol outside the alphabet")
        t = BwtString(np.where(codes == 0, sigma, codes - 1), sigma)
        try:
            pieces.append(bwt_inverse(machine, t))
        except InvalidInputError as exc:
            raise DecodeError(f"segment {len(pieces)} does not decode to a valid transform: {exc}") from None
    values = np.concatenate(pieces) if pieces else np.empty(0, np.int64)
    return restore(values, kind, alphabet)


def pack_entropy_only(buf: BitBuffer, n: int, sigma: int) -> bytes:
    """File form: magic, version, 8-byte LE n, 2-byte LE sigma, then the bit buffer."""
    if sigma >= 1 << 16:
        raise InvalidInputError("sigma must fit in two bytes")
    return _EO_HEADER.pack(EO_MAGIC, EO_VERSION, n, sigma) + buf.to_bytes()


def unpack_entropy_only(blob: bytes):
    """Return ``(buf, n, sigma)`` from :func:`pack_entropy_only` output."""
    if len(blob) < _EO_HEADER.size:
        raise FormatError("file shorter than the entropy-only header")
    magic, version, n, sigma = _EO_HEADER.unpack_from(blob)
    if magic != EO_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != EO_VERSION:
        raise FormatError(f"unsupported version {version}")
    try:
        buf = BitBuffer.from_bytes(blob[_EO_HEADER.size:])
    except FormatError as exc:
        raise DecodeError(f"payload: {exc}") from None
    return buf, n, sigma


BWT_MAGIC = b"RWSB"
_BWT_HEADER = struct.Struct("<4sBQQ")


def pack_bwt(t: BwtString) -> bytes:
    """File form of a byte transform: magic, version, n, sentinel position, then the n bytes."""
    if t.sigma != 256:
        raise InvalidInputError("only byte transforms have a file form")
    where = np.flatnonzero(t.symbols == 256)
    if len(where) != 1:
        raise InvalidInputError("transform must hold exactly one sentinel")
    rest = np.delete(t.symbols, where[0]).astype(np.uint8).tobytes()
    return _BWT_HEADER.pack(BWT_MAGIC, EO_VERSION, len(rest), int(where[0])) + rest


def unpack_bwt(blob: bytes) -> BwtString:
    if len(blob) < _BWT_HEADER.size:
        raise FormatError("file shorter than the transform header")
    magic, version, n, primary = _BWT_HEADER.unpack_from(blob)
    if magic != BWT_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != EO_VERSION:
        raise FormatError(f"unsupported version {version}")
    body = np.frombuffer(blob, np.uint8, offset=_BWT_HEADER.size).astype(np.int64)
    if len(body) != n or primary > n:
        raise DecodeError(f"header promises {n} bytes with sentinel at {primary}, body holds {len(body)}")
    return BwtString(np.insert(body, primary, 256), 256, None, "bytes")


# ---------------------------------------------------------------------------
# independent oracles


@njit(cache=True)
def _suffix_less(c, j, i):
    k = 0
    while c[j + k] == c[i + k]:
        k += 1
    return c[j + k] < c[i + k]


@njit(cache=True)
def _logspace_bwt(c, shift):
    """For each suffix, count the smaller ones; that count is its row.

    When ``shift > 0`` a four-symbol window ``c[j .. j+3]`` is packed on the
    fly and compared first; only equal windows fall back to a symbol-by-symbol
    comparison.  Nothing beyond a few counters is stored.
    """
    m = c.shape[0]
    out = np.empty(m, np.int64)
    for i in range(m):
        smaller = 0
        if shift > 0 and i + 3 < m:
            ki = (((c[i] << shift | c[i + 1]) << shift | c[i + 2]) << shift) | c[i + 3]
            for j in range(m - 3):
                kj = (((c[j] << shift | c[j + 1]) << shift | c[j + 2]) << shift) | c[j + 3]
                smaller += kj < ki
            for j in range(m - 3):
                kj = (((c[j] << shift | c[j + 1]) << shift | c[j + 2]) << shift) | c[j + 3]
                if kj == ki and j != i:
                    smaller += _suffix_less(c, j, i)
            for j in range(max(m - 3, 0), m):
                smaller += _suffix_less(c, j, i)
        else:
            for j in range(m):
                if j != i:
                    smaller += _suffix_less(c, j, i)
        out[smaller] = c[i - 1] if i > 0 else c[m - 1]
    return out


@njit(cache=True)
def _logspace_many(codes, ends, shift):
    out = np.empty_like(codes)
    start = 0
    for end in ends:
        out[start:end] = _logspace_bwt(codes[start:end], shift)
        start = end
    return out


def _window_shift(sigma):
    cb = bits_for(sigma + 1)
    return cb if 4 * cb <= 62 else 0


def bwt_logspace_oracle(s) -> BwtString:
    """Each output position found by counting smaller suffixes; O(log n)-bit counters only."""
    sym, codes = _text_codes(s)
    return BwtString.from_codes(_logspace_bwt(codes, _window_shift(sym.sigma)), sym)


def bwt_logspace_oracle_many(texts) -> list:
    """:func:`bwt_logspace_oracle` applied to every text in one compiled loop."""
    texts = list(texts)
    if not texts:
        return []
    syms, codes, lengths, sigma = _batch_codes(texts)
    ends = np.cumsum(lengths)
    out = _logspace_many(codes, ends, _window_shift(sigma))
    return [BwtString.from_codes(p, sym) for p, sym in zip(np.split(out, ends[:-1]), syms)]


def bwt_rotation_oracle(s) -> BwtString:
    """Sort all rotations of ``s + '$'`` and read the last column."""
    sym, codes = _text_codes(s)
    text = "".join(map(chr, codes.tolist()))
    m = len(text)
    rotations = sorted(text[i:] + text[:i] for i in range(m))
    return BwtString.from_codes([ord(r[-1]) for r in rotations], sym)
