"""De Bruijn cycles, their count, and the low-entropy strings built from them."""

from __future__ import annotations

import math
import string
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import InvalidInputError

MAX_CYCLE_LENGTH = 1 << 26
MAX_COUNT_DIGITS = 100_000
MAX_ENUMERATION = 12
DIGITS = string.digits + string.ascii_lowercase + string.ascii_uppercase


@dataclass(frozen=True)
class DeBruijnCycle:
    sigma: int
    k: int
    cycle: np.ndarray

    @property
    def text(self) -> str:
        if self.sigma > len(DIGITS):
            raise InvalidInputError(f"no character rendering for sigma = {self.sigma}")
        return "".join(DIGITS[x] for x in self.cycle.tolist())

    def is_valid(self) -> bool:
        return is_debruijn(self.cycle, self.sigma, self.k)


def _check_args(sigma, k):
    if sigma < 2 or k < 1:
        raise InvalidInputError("need sigma >= 2 and k >= 1")


def is_debruijn(cycle, sigma: int, k: int) -> bool:
    """Every k-tuple occurs exactly once in ``cycle`` read cyclically."""
    c = np.asarray(cycle, dtype=np.int64)
    m = sigma ** k
    if len(c) != m or (m and (c.min() < 0 or c.max() >= sigma)):
        return False
    ext = np.concatenate([c, c[: k - 1]])
    codes = np.zeros(m, np.int64)
    for j in range(k):
        codes = codes * sigma + ext[j: j + m]
    return bool(np.all(np.bincount(codes, minlength=m) == 1))


@njit(cache=True)
def _hierholzer(sigma, k):
    nodes = sigma ** (k - 1)
    nxt = np.zeros(nodes, np.int64)       # next unused edge label per node
    stack = np.zeros(sigma ** k + 1, np.int64)
    labels = np.zeros(sigma ** k + 1, np.int64)
    out = np.zeros(sigma ** k, np.int64)
    top = 1
    stack[0] = 0
    pos = sigma ** k
    while top > 0:
        v = stack[top - 1]
        if nxt[v] < sigma:
            a = nxt[v]
            nxt[v] += 1
            stack[top] = (v * sigma + a) % nodes
            labels[top] = a
            top += 1
        else:
            top -= 1
            if top > 0:
                pos -= 1
                out[pos] = labels[top]
    return out


def generate_cycle(sigma: int, k: int) -> DeBruijnCycle:
    """Eulerian circuit on the order-(k-1) graph, smallest edge first, rotated to start with ``0**k``."""
    _check_args(sigma, k)
    if sigma ** k > MAX_CYCLE_LENGTH:
        raise InvalidInputError(f"sigma**k = {sigma ** k} exceeds the cap of {MAX_CYCLE_LENGTH}")
    cycle = _hierholzer(sigma, k)
    # rotate so the cycle opens with k zeros
    wrapped = np.concatenate([cycle, cycle[: k - 1]]) == 0
    start = int(np.flatnonzero(np.convolve(wrapped, np.ones(k, np.int64), "valid") == k)[0])
    return DeBruijnCycle(sigma, k, np.roll(cycle, -start))


def count_cycles(sigma: int, k: int) -> int:
    """``sigma! ** (sigma ** (k-1)) // sigma ** k``, exactly."""
    _check_args(sigma, k)
    # digits of the numerator: sigma**(k-1) * log10(sigma!)
    if sigma ** (k - 1) * math.lgamma(sigma + 1) / math.log(10) > MAX_COUNT_DIGITS:
        raise OverflowError(f"count for sigma={sigma}, k={k} exceeds {MAX_COUNT_DIGITS} digits")
    num = math.factorial(sigma) ** (sigma ** (k - 1))
    q, r = divmod(num, sigma ** k)
    assert r == 0
    return q


@njit(cache=True)
def _search(sigma, k, collect, limit):
    m = sigma ** k
    mask = sigma ** (k - 1)
    seq = np.zeros(m, np.int64)
    used = np.zeros(m, np.bool_)
    choice = np.full(m + 1, -1, np.int64)
    found = np.zeros((limit if collect else 0, m), np.int64)
    count = 0
    used[0] = True           # anchored at the all-zero tuple
    depth = k                # seq[:k] == 0
    code = 0                 # current k-tuple code
    codes = np.zeros(m + 1, np.int64)
    codes[k] = 0
    while depth >= k:
        if depth == m:
            ok = True
            cur = codes[depth]
            seen = used.copy()
            for j in range(k - 1):
                cur = (cur % mask) * sigma + seq[j]
                if seen[cur]:
                    ok = False
                    break
                seen[cur] = True
            if ok:
                if collect:
                    found[count] = seq
                count += 1
            depth -= 1
            if depth >= k:
                used[codes[depth + 1]] = False
            continue
        a = choice[depth] + 1
        base = (codes[depth] % mask) * sigma
        while a < sigma and used[base + a]:
            a += 1
        if a == sigma:
            choice[depth] = -1
            depth -= 1
            if depth >= k:
                used[codes[depth + 1]] = False
            continue
        choice[depth] = a
        seq[depth] = a
        code = base + a
        used[code] = True
        codes[depth + 1] = code
        depth += 1
    return count, found


def count_cycles_enumerated(sigma: int, k: int) -> int:
    """Number of valid cycles found by exhaustive search (``sigma**k <= 12``)."""
    _check_args(sigma, k)
    if sigma ** k > MAX_ENUMERATION:
        raise InvalidInputError(f"enumeration needs sigma**k <= {MAX_ENUMERATION}")
    return int(_search(sigma, k, False, 0)[0])


def enumerate_cycles_small(sigma: int, k: int, limit: int = 1_000_000) -> list:
    """All cycles, each rotated to start with ``k`` zeros.  At most ``limit`` are materialised."""
    total = count_cycles_enumerated(sigma, k)
    if total > limit:
        raise InvalidInputError(f"{total} cycles exceed the listing limit {limit}; use count_cycles_enumerated")
    _, found = _search(sigma, k, True, max(total, 1))
    return [DeBruijnCycle(sigma, k, row.copy()) for row in found[:total]]


def adversarial_string(sigma: int, k: int, n: int):
    """``d`` repeated to length ``n`` (last copy truncated); characters when ``sigma <= 62``."""
    if n < 0:
        raise InvalidInputError("n must be non-negative")
    d = generate_cycle(sigma, k)
    values = np.resize(d.cycle, n) if n else np.empty(0, np.int64)
    if sigma > len(DIGITS):
        return values
    table = np.frombuffer(DIGITS.encode(), np.uint8)
    return table[values].tobytes().decode()
