"""Minimum periods (brute force and on two streams) and small grammars for periodic strings.

Periods on streams
------------------
``p`` is a period of ``s`` exactly when the suffix ``s[p:]`` of length
``L = n - p`` is also a prefix of ``s``.  While the suffix sorter doubles
``h``, its tape holds the rank of every length-``h`` window in text order.
For ``h <= L < 2h`` the border test needs only two window comparisons::

    s[p : p+h] == s[0 : h]   and   s[n-h : n] == s[n-p-h : n-p]

For one ``h`` the candidates ``p`` form a contiguous range and both tests
compare against a single fixed window (``s[0:h]`` and ``s[n-h:n]``).  The
ranks are copied to the second tape and the two heads then move forward
together, the second one running ``n - h`` records ahead, so each round
costs a constant number of passes.  Once all windows are
distinct no longer border exists.  The smallest hit is then checked
directly by comparing ``s`` with itself shifted.

Grammars
--------
For ``s = t^q t'`` with ``|t| = l`` the grammar is::

    S0 -> S1 S3      X -> S2      S2 -> t      S3 -> t'
    A1 -> X X, A2 -> A1 A1, ...   S1 -> product of A_j over the set bits of q

(``A0`` is ``X`` itself; ``S3`` is omitted when ``t'`` is empty.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .alphabet import bits_for, restore, to_symbols
from .bwt_pipeline import _suffix_sort
from .errors import InvalidInputError
from .stream_machine import StreamMachine, two_streams


@njit(cache=True)
def _min_period(v):
    n = v.shape[0]
    for p in range(1, n):
        ok = True
        for i in range(n - p):
            if v[i] != v[i + p]:
                ok = False
                break
        if ok:
            return p
    return n


def min_period_oracle(s) -> int:
    """Smallest ``l >= 1`` with ``s[i] == s[i + l]`` wherever both exist."""
    values = to_symbols(s).values
    if len(values) == 0:
        raise InvalidInputError("the empty string has no period")
    return int(_min_period(values))


def min_period_streams(machine: StreamMachine, s) -> int:
    """Minimum period of ``s`` using the suffix sorter's rounds on two tapes."""
    sym = to_symbols(s)
    n = len(sym)
    if n == 0:
        raise InvalidInputError("the empty string has no period")
    return min_period_many(machine, [sym])[0]


def min_period_many(machine: StreamMachine, texts) -> list:
    """Minimum periods of several texts computed in one batch."""
    syms = [to_symbols(t) for t in texts]
    if any(len(x) == 0 for x in syms):
        raise InvalidInputError("the empty string has no period")
    lengths = np.array([len(x) + 1 for x in syms], dtype=np.int64)
    n = lengths - 1
    offsets = np.cumsum(lengths) - lengths
    codes = np.zeros(int(lengths.sum()), np.int64)
    for x, off in zip(syms, offsets.tolist()):
        codes[off: off + len(x)] = x.values + 1
    sigma = max(x.sigma for x in syms)
    best = n.copy()

    def borders(cur, other, h, w):
        # candidates p with h <= n - p < 2h and p >= 1
        lo = np.maximum(n - 2 * h + 1, 1)
        hi = n - h
        count = np.maximum(hi - lo + 1, 0)
        if not count.any():
            return
        machine.declare_memory(4 * w + 2 * bits_for(int(n.max()) + 1))
        ranks = cur.read_all()[:, 0] & ((1 << w) - 1)
        other.write_all(ranks, w)
        cur.read_all()
        other.read_all()   # head offset by n - h on the copy
        owner = np.repeat(np.arange(len(n)), count)
        p = np.arange(int(count.sum())) - np.repeat(np.cumsum(count) - count, count) + np.repeat(lo, count)
        base = offsets[owner]
        first = ranks[base + p] == ranks[base]
        second = ranks[base + n[owner] - h] == ranks[base + n[owner] - p - h]
        hit = first & second
        if hit.any():
            np.minimum.at(best, owner[hit], p[hit])

    _suffix_sort(machine, codes, lengths, sigma, level_hook=borders)
    out = []
    for x, ell in zip(syms, best.tolist()):
        if ell < len(x) and not _check_period(machine, x.values, ell):
            raise AssertionError(f"border test and direct check disagree on period {ell}")
        out.append(int(ell))
    return out


def _check_period(machine, values, ell) -> bool:
    """Compare ``s`` with ``s`` shifted by ``ell`` using two heads on two tapes."""
    n = len(values)
    bits = bits_for(int(values.max()) + 1) if n else 1
    a, b = two_streams(machine, values, bits)
    b.write_all(a.read_all(), bits)
    machine.declare_memory(2 * bits + bits_for(n + 1))
    b.skip(ell)
    ahead = b.read_block(n - ell)
    b.rewind()
    return bool(np.array_equal(a.read_all()[: n - ell], ahead))


# ---------------------------------------------------------------------------
# grammars


@dataclass
class Grammar:
    """Straight-line grammar.  Nonterminals are ``str`` names, terminals ``int`` symbols."""

    productions: dict = field(default_factory=dict)
    start: str = "S0"
    sigma: int = 1
    alphabet: tuple | None = None
    kind: str = "ints"

    def nonterminals(self):
        return list(self.productions)

    def to_text(self) -> str:
        """One production per line, ``N: rhs ...``, start production first."""
        order = [self.start] + [k for k in self.productions if k != self.start]
        return "\n".join(f"{name}: " + " ".join(self._show(x) for x in self.productions[name])
                         for name in order) + "\n"

    def _show(self, x):
        if isinstance(x, str):
            return x
        if self.alphabet is not None:
            return repr(self.alphabet[x])
        return f"#{x}"


def build_periodic_grammar(s, ell: int) -> Grammar:
    sym = to_symbols(s)
    v = sym.values
    n = len(v)
    if n == 0 or ell < 1 or ell > n:
        raise InvalidInputError("period must lie in [1, n] for a non-empty string")
    if not np.array_equal(v[ell:], v[: n - ell]):
        raise InvalidInputError(f"{ell} is not a period of the string")
    q, rest = divmod(n, ell)
    prods = {"S0": ["S1", "S3"] if rest else ["S1"], "X": ["S2"], "S2": v[:ell].tolist()}
    if rest:
        prods["S3"] = v[q * ell:].tolist()
    level = "X"
    powers = ["X"]
    for j in range(1, q.bit_length()):
        name = f"A{j}"
        prods[name] = [level, level]
        level = name
        powers.append(name)
    prods["S1"] = [powers[j] for j in range(q.bit_length() - 1, -1, -1) if (q >> j) & 1]
    ordered = {k: prods[k] for k in ["S0", "S1", "S3", "X", "S2"] if k in prods}
    ordered.update({k: prods[k] for k in prods if k not in ordered})
    return Grammar(ordered, "S0", sym.sigma, sym.alphabet, sym.kind)


def expand_grammar(g: Grammar):
    """The unique string derived from ``g.start``; raises on cycles or undefined names."""
    done: dict = {}
    state: dict = {}
    stack = [g.start]
    while stack:
        name = stack[-1]
        if name in done:
            stack.pop()
            continue
        if name not in g.productions:
            raise InvalidInputError(f"nonterminal {name!r} has no production")
        rhs = g.productions[name]
        if state.get(name) is None:
            state[name] = "open"
            pending = [x for x in rhs if isinstance(x, str) and x not in done]
            for x in pending:
                if state.get(x) == "open":
                    raise InvalidInputError(f"grammar is cyclic through {x!r}")
            stack.extend(pending)
            if pending:
                continue
        parts = [done[x] if isinstance(x, str) else np.array([x], np.int64) for x in rhs]
        done[name] = np.concatenate(parts) if parts else np.empty(0, np.int64)
        state[name] = "closed"
        stack.pop()
    return restore(done[g.start], g.kind, g.alphabet)


def grammar_size_bits(g: Grammar) -> int:
    """Total right-hand-side length times ``ceil(log2(#nonterminals + sigma))``."""
    width = max(1, math.ceil(math.log2(len(g.productions) + g.sigma)))
    return sum(len(rhs) for rhs in g.productions.values()) * width
