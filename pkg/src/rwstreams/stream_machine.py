"""Read/write streams: sequential tapes with pass counters and a memory budget.

A :class:`StreamMachine` owns up to ``budget.max_streams`` tapes.  Each tape
holds fixed-width records (``record_bits`` per record, stored as ``int64``;
a record may be a row of several ``int64`` fields whose widths the caller
accounts for).  Heads only move one record at a time.  A pass is counted on
a tape whenever its head is rewound, or its direction reversed, after having
moved.

Memory accounting is cooperative: algorithms call
:meth:`StreamMachine.declare_memory` with the size of their working set and
the machine raises :class:`BudgetError` if that exceeds ``memory_bits``.

Bulk helpers (:meth:`Stream.read_all`, :meth:`Stream.write_all`,
:meth:`Stream.sweep`) perform one complete traversal in a single call so
the simulation stays fast; their accounting is identical to stepping the
head record by record and rewinding at the end.
"""

from __future__ import annotations

import json
import math
import struct
from dataclasses import asdict, dataclass

import numpy as np
from numba import njit

from .errors import BudgetError, FormatError, InvalidInputError, PassLimitError

FORWARD = 1
BACKWARD = -1


@dataclass(frozen=True)
class MachineBudget:
    memory_bits: int
    max_streams: int = 2
    pass_limit: int | None = None

    def __post_init__(self):
        if self.memory_bits < 1:
            raise InvalidInputError("memory_bits must be positive")
        if self.max_streams < 1:
            raise InvalidInputError("max_streams must be positive")
        if self.pass_limit is not None and self.pass_limit < 1:
            raise InvalidInputError("pass_limit must be positive")


def default_budget(n: int, max_streams: int = 2, pass_limit: int | None = None) -> MachineBudget:
    """``64 * L**2`` bits with ``L = max(ceil(log2(n + 2)), 8)``."""
    log_n = max(math.ceil(math.log2(n + 2)), 8)
    return MachineBudget(64 * log_n * log_n, max_streams, pass_limit)


@dataclass
class UsageReport:
    per_stream_passes: list
    total_passes: int
    peak_declared_memory_bits: int
    records_read: int
    records_written: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "UsageReport":
        return cls(**json.loads(text))


class Stream:
    """One tape.  Obtain instances through :meth:`StreamMachine.attach_stream`."""

    __slots__ = (
        "machine", "index", "data", "record_bits", "head", "direction",
        "passes_completed", "movement", "_moved",
    )

    def __init__(self, machine, index, contents, record_bits):
        self.machine = machine
        self.index = index
        self.data = _as_records(contents)
        self.record_bits = int(record_bits)
        self.head = 0
        self.direction = FORWARD
        self.passes_completed = 0
        self.movement = 0
        self._moved = False

    def __len__(self):
        return self.data.shape[0]

    def __repr__(self):
        return (f"Stream(#{self.index}, records={len(self)}, record_bits={self.record_bits}, "
                f"head={self.head}, passes={self.passes_completed})")

    # -- single-step access -------------------------------------------------

    def read(self):
        """Read the record under the head and step once in the current direction."""
        if self.direction == FORWARD:
            if self.head >= len(self):
                raise EOFError("read past end of stream")
            value = self.data[self.head]
            self.head += 1
        else:
            if self.head <= 0:
                raise EOFError("read past start of stream")
            self.head -= 1
            value = self.data[self.head]
        self._step(1)
        self.machine.records_read += 1
        return value.tolist() if self.data.ndim == 2 else int(value)

    def write(self, value):
        """Overwrite (or append at the end) the record under the head, moving forward."""
        if self.direction != FORWARD:
            raise InvalidInputError("writes are only supported moving forward")
        row = np.asarray(value, dtype=np.int64)
        if self.head == len(self):
            self.data = np.concatenate([self.data, row.reshape((1,) + self.data.shape[1:])])
        else:
            self.data[self.head] = row
        self.head += 1
        self._step(1)
        self.machine.records_written += 1

    def skip(self, count: int):
        """Move the head ``count`` records forward without reading."""
        count = min(count, len(self) - self.head)
        self.head += count
        self._step(count)

    def truncate(self):
        """Drop every record from the head onwards (end-of-tape mark)."""
        self.data = self.data[: self.head]

    def rewind(self):
        self.head = 0
        self.direction = FORWARD
        self._boundary()

    def reverse(self):
        self.direction = -self.direction
        self._boundary()

    # -- whole-pass helpers -------------------------------------------------

    def read_all(self, start: int = 0) -> np.ndarray:
        """One pass: read every record from position 0, return those at ``start`` onward."""
        self._require_at_start()
        n = len(self)
        self.machine.records_read += max(0, n - start)
        self.head = n
        self._step(n)
        out = self.data[start:]
        self.rewind()
        return out

    def read_block(self, count: int) -> np.ndarray:
        """Read the next ``count`` records (fewer at end of tape) without rewinding."""
        if self.direction != FORWARD:
            raise InvalidInputError("block reads move forward")
        out = self.data[self.head: self.head + count]
        self.head += len(out)
        self._step(len(out))
        self.machine.records_read += len(out)
        return out

    def write_all(self, records, record_bits: int | None = None):
        """One pass: replace the tape contents with ``records``."""
        self._require_at_start()
        self.data = _as_records(records)
        if record_bits is not None:
            self.record_bits = int(record_bits)
        n = len(self)
        self.machine.records_written += n
        self.head = n
        self._step(n)
        self.rewind()

    def sweep(self, fn, record_bits: int | None = None):
        """One read/write pass: each record is read and replaced in place by ``fn``'s output."""
        self._require_at_start()
        n = len(self)
        new = _as_records(fn(self.data))
        self.machine.records_read += n
        self.machine.records_written += len(new)
        self.data = new
        if record_bits is not None:
            self.record_bits = int(record_bits)
        self.head = max(n, len(new))
        self._step(self.head)
        self.rewind()

    def load(self, contents, record_bits: int | None = None):
        """Place input on a fresh tape.  Loading is not a pass."""
        self.data = _as_records(contents)
        if record_bits is not None:
            self.record_bits = int(record_bits)
        self.head = 0
        self.direction = FORWARD
        self._moved = False

    # -- snapshots ----------------------------------------------------------

    def save(self, path):
        with open(path, "wb") as fh:
            fh.write(snapshot_bytes(self.data, self.record_bits))

    def restore(self, path):
        with open(path, "rb") as fh:
            data, bits = snapshot_from_bytes(fh.read())
        self.load(data, bits)

    # -- internals ----------------------------------------------------------

    def _require_at_start(self):
        if self.head != 0 or self.direction != FORWARD:
            raise InvalidInputError("whole-pass operations start from a rewound head")

    def _step(self, count):
        if count:
            self.movement += count
            self._moved = True

    def _boundary(self):
        if self._moved:
            self._moved = False
            self.passes_completed += 1
            self.machine._count_pass()


def _as_records(contents) -> np.ndarray:
    arr = np.asarray(contents, dtype=np.int64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim > 2:
        raise InvalidInputError("records must be scalars or flat rows")
    return arr


class StreamMachine:
    """A single-threaded read/write-streams machine."""

    def __init__(self, budget: MachineBudget):
        self.budget = budget
        self.streams: list[Stream] = []
        self.current_memory_bits = 0
        self.peak_declared_memory_bits = 0
        self.records_read = 0
        self.records_written = 0
        self._total_passes = 0

    def attach_stream(self, contents=(), record_bits: int = 8) -> Stream:
        if record_bits < 1:
            raise InvalidInputError("record_bits must be at least 1")
        if len(self.streams) >= self.budget.max_streams:
            raise BudgetError(
                f"cannot attach stream {len(self.streams) + 1}: budget allows {self.budget.max_streams}"
            )
        stream = Stream(self, len(self.streams), contents, record_bits)
        self.streams.append(stream)
        return stream

    def declare_memory(self, bits: int):
        bits = int(bits)
        if bits < 0:
            raise InvalidInputError("declared memory must be non-negative")
        if bits > self.budget.memory_bits:
            raise BudgetError(f"working set of {bits} bits exceeds budget of {self.budget.memory_bits}")
        self.current_memory_bits = bits
        if bits > self.peak_declared_memory_bits:
            self.peak_declared_memory_bits = bits

    @property
    def total_passes(self) -> int:
        return self._total_passes

    def _count_pass(self):
        self._total_passes += 1
        limit = self.budget.pass_limit
        if limit is not None and self._total_passes > limit:
            raise PassLimitError(f"pass limit {limit} exceeded")

    def report(self) -> UsageReport:
        per = [s.passes_completed for s in self.streams]
        return UsageReport(per, sum(per), self.peak_declared_memory_bits,
                           self.records_read, self.records_written)


def two_streams(machine: StreamMachine, contents, record_bits: int):
    """Return ``(input, scratch)``: attach two tapes, or reuse the two already attached.

    ``contents`` is loaded onto the first tape as input (not a pass).
    """
    while len(machine.streams) < 2:
        machine.attach_stream((), record_bits)
    first, second = machine.streams[0], machine.streams[1]
    for s in (first, second):
        if s.head or s.direction != FORWARD:
            s.rewind()
    first.load(contents, record_bits)
    second.load(np.empty((0,), np.int64), record_bits)
    return first, second


# ---------------------------------------------------------------------------
# two-stream merge sort


@njit(cache=True)
def _merge_round(keys, rows, run):
    """Merge consecutive sorted runs of length ``run`` pairwise (stable)."""
    n, width = rows.shape
    out_keys = np.empty_like(keys)
    out_rows = np.empty_like(rows)
    pos = 0
    for start in range(0, n, 2 * run):
        mid = min(start + run, n)
        end = min(start + 2 * run, n)
        i = start
        j = mid
        while i < mid or j < end:
            if i < mid and (j >= end or keys[j] >= keys[i]):
                src = i
                i += 1
            else:
                src = j
                j += 1
            out_keys[pos] = keys[src]
            for c in range(width):
                out_rows[pos, c] = rows[src, c]
            pos += 1
    return out_keys, out_rows


def _form_runs(keys, run):
    """Stable permutation sorting each consecutive block of ``run`` keys."""
    n = keys.shape[0]
    if n <= run:
        return np.argsort(keys, kind="stable")
    blocks = -(-n // run)
    pad = blocks * run - n
    padded = keys if pad == 0 else np.concatenate([keys, np.full(pad, keys.max(), keys.dtype)])
    local = np.argsort(padded.reshape(blocks, run), axis=1, kind="stable")
    perm = (local + (np.arange(blocks) * run)[:, None]).reshape(-1)
    return perm[perm < n] if pad else perm


def merge_rounds(n: int, run_capacity: int) -> int:
    """Number of 2-way merge rounds after forming runs of ``run_capacity`` records."""
    if n <= run_capacity:
        return 0
    return math.ceil(math.log2(math.ceil(n / run_capacity)))


def two_stream_merge_sort(machine: StreamMachine, source: Stream, scratch: Stream, key=None,
                          run_capacity: int | None = None) -> Stream:
    """Stable external merge sort of ``source`` using only ``source`` and ``scratch``.

    ``key`` maps a records array to a 1-D array of sort keys; ``None`` sorts
    scalar records by value.  Runs of ``R`` records (``run_capacity``, by
    default ``memory_bits // record_bits``) are formed in memory, then merged pairwise; each round is one
    pass over each tape, so the total is ``2 * (rounds + 1)`` passes.
    Returns whichever tape holds the sorted records.
    """
    run = machine.budget.memory_bits // source.record_bits if run_capacity is None else int(run_capacity)
    if run * source.record_bits > machine.budget.memory_bits:
        raise BudgetError(f"{run} records of {source.record_bits} bits exceed {machine.budget.memory_bits}")
    if run < 2:
        raise BudgetError(
            f"run capacity {run} < 2 records of {source.record_bits} bits in {machine.budget.memory_bits}"
        )
    n = len(source)
    if n == 0:
        return source
    bits = source.record_bits

    data = source.read_all()
    keys = data if key is None else np.asarray(key(data))
    if keys.ndim != 1:
        raise InvalidInputError("sort key must be one value per record")
    machine.declare_memory(min(n, run) * bits)
    perm = _form_runs(keys, run)
    data = data[perm]
    keys = keys[perm]
    scratch.write_all(data, bits)
    cur, other = scratch, source
    if run < n:
        machine.declare_memory(2 * bits + 2 * max(1, n.bit_length()))
    rows = data.reshape(n, -1)
    while run < n:
        cur.read_all()
        keys, rows = _merge_round(keys, rows, run)
        other.write_all(rows.reshape(data.shape), bits)
        cur, other = other, cur
        run *= 2
    return cur


# ---------------------------------------------------------------------------
# snapshot file format


def snapshot_bytes(records: np.ndarray, record_bits: int) -> bytes:
    """8-byte LE record count, 2-byte LE record width, then records MSB-first."""
    records = np.asarray(records, dtype=np.int64)
    if records.ndim != 1:
        raise InvalidInputError("only scalar-record streams can be snapshotted")
    if record_bits > 63:
        raise InvalidInputError("record_bits above 63 cannot be snapshotted")
    if records.size and (records.min() < 0 or int(records.max()) >> record_bits):
        raise InvalidInputError(f"record does not fit in {record_bits} bits")
    header = struct.pack("<QH", len(records), record_bits)
    shifts = np.arange(record_bits - 1, -1, -1, dtype=np.int64)
    bits = ((records[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)
    return header + np.packbits(bits).tobytes()


def snapshot_from_bytes(blob: bytes):
    if len(blob) < 10:
        raise FormatError("snapshot shorter than its header")
    count, record_bits = struct.unpack_from("<QH", blob)
    if record_bits < 1 or record_bits > 63:
        raise FormatError(f"bad record width {record_bits}")
    need = -(-count * record_bits // 8)
    body = np.frombuffer(blob, dtype=np.uint8, offset=10)
    if len(body) < need:
        raise FormatError("snapshot truncated")
    bits = np.unpackbits(body[:need])[: count * record_bits].astype(np.int64)
    weights = np.left_shift(1, np.arange(record_bits - 1, -1, -1, dtype=np.int64))
    records = bits.reshape(count, record_bits) @ weights if count else np.empty(0, np.int64)
    return records.astype(np.int64), record_bits
