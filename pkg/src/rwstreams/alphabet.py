"""Conversion between user-facing strings and integer symbol arrays.

Every algorithm works on ``int64`` arrays of symbols in ``range(sigma)``.
Three input kinds are accepted:

* ``str``: the alphabet is the sorted set of distinct characters, so
  ``"banana"`` becomes ``[1, 0, 2, 0, 2, 0]`` over ``("a", "b", "n")``.
* ``bytes`` / ``bytearray``: byte values with ``sigma = 256``.
* any integer sequence or array: values as given, ``sigma = max + 1``
  unless supplied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class Symbols:
    values: np.ndarray
    sigma: int
    alphabet: tuple | None = None  # characters, for str input
    kind: str = "ints"  # "str", "bytes" or "ints"

    def __len__(self):
        return len(self.values)

    def restore(self, values) -> str | bytes | np.ndarray:
        """Map symbol values back to the original input kind."""
        return restore(values, self.kind, self.alphabet)


def restore(values, kind: str, alphabet=None):
    values = np.asarray(values, dtype=np.int64)
    if kind == "str":
        return "".join(alphabet[v] for v in values.tolist())
    if kind == "bytes":
        return values.astype(np.uint8).tobytes()
    return values


def to_symbols(s, sigma: int | None = None, alphabet=None) -> Symbols:
    if isinstance(s, Symbols):
        return s
    if isinstance(s, str):
        if alphabet is None:
            alphabet = tuple(sorted(set(s)))
        index = {ch: i for i, ch in enumerate(alphabet)}
        try:
            values = np.fromiter((index[ch] for ch in s), dtype=np.int64, count=len(s))
        except KeyError as exc:
            raise InvalidInputError(f"character {exc.args[0]!r} not in alphabet") from None
        return Symbols(values, max(len(alphabet), 1) if sigma is None else sigma, tuple(alphabet), "str")
    if isinstance(s, (bytes, bytearray, memoryview)):
        values = np.frombuffer(bytes(s), dtype=np.uint8).astype(np.int64)
        return Symbols(values, 256 if sigma is None else sigma, None, "bytes")
    values = np.asarray(s, dtype=np.int64).reshape(-1)
    if values.size and values.min() < 0:
        raise InvalidInputError("symbols must be non-negative")
    top = int(values.max()) + 1 if values.size else 1
    if sigma is None:
        sigma = top
    elif top > sigma:
        raise InvalidInputError(f"symbol {top - 1} out of range for sigma={sigma}")
    return Symbols(values, max(sigma, 1), None, "ints")


def bits_for(count: int) -> int:
    """Bits needed to write any value in ``range(count)`` (at least 1)."""
    return max(1, (count - 1).bit_length())
