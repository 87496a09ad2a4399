"""Empirical entropy of strings: occurrence counts, H_0, H_k and the floor-term surrogate H_k*.

Contexts are the k-tuples starting at positions ``0 .. n-k-1``; the
follower of a context is the character right after it (no wrap-around).
All functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .alphabet import to_symbols
from .errors import InvalidInputError


def occ(a, s) -> int:
    """Number of times symbol ``a`` occurs in ``s``."""
    if isinstance(s, str):
        return s.count(a)
    if isinstance(s, (bytes, bytearray)):
        return s.count(bytes([a]) if isinstance(a, int) else a)
    return int(np.count_nonzero(np.asarray(s) == a))


def _zero_order_bits(counts) -> float:
    """``len * H_0`` for a multiset given by its symbol counts."""
    total = sum(counts)
    if total == 0:
        return 0.0
    return math.fsum(c * math.log2(total / c) for c in counts if c and c != total)


def h0(s) -> float:
    """Zeroth-order empirical entropy in bits per character."""
    values = to_symbols(s).values
    if len(values) == 0:
        raise InvalidInputError("H_0 of the empty string is undefined")
    counts = np.bincount(values)
    return _zero_order_bits(counts.tolist()) / len(values)


def context_followers(values: np.ndarray, k: int) -> dict:
    """Map each occurring context to the symbol counts of its followers.

    Contexts are returned as tuples of symbols; the value is a dict
    ``{symbol: count}``.
    """
    n = len(values)
    table: dict = {}
    if k == 0:
        if n:
            symbols, counts = np.unique(values, return_counts=True)
            table[()] = dict(zip(symbols.tolist(), counts.tolist()))
        return table
    ids, followers = _context_ids(values, k)
    order = np.lexsort((followers, ids))
    ids = ids[order]
    followers = followers[order]
    change = np.flatnonzero((ids[1:] != ids[:-1]) | (followers[1:] != followers[:-1])) + 1
    starts = np.concatenate([[0], change])
    runs = np.diff(np.concatenate([starts, [len(ids)]]))
    first_pos = order[starts]
    for start, pos, length in zip(starts.tolist(), first_pos.tolist(), runs.tolist()):
        ctx = tuple(values[pos: pos + k].tolist())
        table.setdefault(ctx, {})[int(followers[start])] = length
    return table


def _context_ids(values, k):
    """Integer id for every context occurrence plus its follower symbol."""
    n = len(values)
    count = n - k
    sigma = int(values.max()) + 1 if n else 1
    if sigma ** k < 2 ** 62:
        ids = np.zeros(count, dtype=np.int64)
        for j in range(k):
            ids = ids * sigma + values[j: j + count]
    else:
        windows = np.lib.stride_tricks.sliding_window_view(values, k)[:count]
        _, ids = np.unique(windows, axis=0, return_inverse=True)
        ids = ids.reshape(-1).astype(np.int64)
    return ids, values[k:]


def hk(s, k: int) -> float:
    """k-th order empirical entropy in bits per character (``hk(s, 0) == h0(s)``)."""
    values = to_symbols(s).values
    n = len(values)
    if k < 0:
        raise InvalidInputError("order must be non-negative")
    if k >= n:
        raise InvalidInputError(f"order {k} must be smaller than the length {n}")
    if k == 0:
        return h0(values)
    table = context_followers(values, k)
    return math.fsum(_zero_order_bits(list(c.values())) for c in table.values()) / n


def hk_star_total(s, k: int) -> float:
    """Total bits of the modified entropy surrogate.

    Each occurring context ``w`` contributes
    ``max(|w_s| H_0(w_s), floor(log2 |w_s|) + 1)``.
    """
    values = to_symbols(s).values
    n = len(values)
    if k < 0 or k >= n:
        raise InvalidInputError(f"order {k} must be in [0, {n})")
    table = context_followers(values, k)
    terms = []
    for counts in table.values():
        c = list(counts.values())
        size = sum(c)
        terms.append(max(_zero_order_bits(c), math.floor(math.log2(size)) + 1))
    return math.fsum(terms)


@dataclass
class ContextRow:
    context: tuple
    follower_length: int
    follower_h0: float


@dataclass
class EntropyReport:
    n: int
    sigma: int
    per_order: list = field(default_factory=list)  # (k, H_k, H_k* total)
    context_table: dict = field(default_factory=dict)  # k -> [ContextRow]

    def to_dict(self):
        return {
            "n": self.n,
            "sigma": self.sigma,
            "per_order": [list(row) for row in self.per_order],
            "context_table": {str(k): [asdict(r) for r in rows] for k, rows in self.context_table.items()},
        }


def entropy_report(s, orders=(0, 1, 2), with_contexts: bool = False) -> EntropyReport:
    sym = to_symbols(s)
    values = sym.values
    report = EntropyReport(len(values), sym.sigma)
    for k in orders:
        if k >= len(values):
            continue
        report.per_order.append((k, hk(values, k), hk_star_total(values, k)))
        if with_contexts:
            rows = []
            for ctx, counts in sorted(context_followers(values, k).items()):
                c = list(counts.values())
                rows.append(ContextRow(ctx, sum(c), _zero_order_bits(c) / sum(c)))
            report.context_table[k] = rows
    return report
