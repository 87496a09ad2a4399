import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rwstreams.block_universal import (
    CompressedContainer,
    choose_order,
    compress,
    decompress,
    default_block_size,
    max_order,
)
from rwstreams.errors import DecodeError, FormatError, InvalidInputError


def test_unary_blocks_use_order_zero(machine):
    n = 1 << 16
    m = machine(n)
    c = compress(m, np.ones(n, np.int64), block_size=256, sigma=2)
    assert {k for k, _, _ in c.blocks} == {0}
    assert c.payload_bits() < n // 20
    assert m.total_passes == 1
    assert decompress(c).tolist() == [1] * n


def test_random_block_is_incompressible(machine):
    rng = np.random.default_rng(0)
    s = rng.integers(0, 2, 4096)
    c = compress(machine(4096), s, block_size=4096, sigma=2)
    assert c.payload_bits() >= 4096 - 2 * math.log2(4096)


def test_empty_input(machine):
    c = compress(machine(0), b"")
    assert c.blocks == [] and c.n == 0
    assert decompress(c.to_bytes(), kind="bytes") == b""


def test_choose_order():
    k, buf = choose_order("ab" * 64, 2)
    assert k == 1 and len(buf) < 20
    k, buf = choose_order("a" * 100, 2, sigma=2)
    assert k == 0 and len(buf) < 12
    rng = np.random.default_rng(3)
    block = rng.integers(0, 2, 256)
    sizes = [len(choose_order(block, j, 2)[1]) for j in range(4)]
    assert max(sizes) - min(sizes) <= 8 + 2 * 8


def test_bytes_round_trip_and_format(machine):
    data = b"the quick brown fox jumps over the lazy dog " * 50
    c = compress(machine(len(data)), data)
    blob = c.to_bytes()
    assert CompressedContainer.from_bytes(blob).to_bytes() == blob
    assert decompress(blob, machine(len(blob)), kind="bytes") == data


def test_unknown_length_growth(machine):
    data = bytes(range(256)) * 80
    c = compress(machine(memory_bits=1 << 20), data, length_known=False)
    assert c.growth
    sizes = c.block_lengths()
    assert sizes[0] == 4096 and sum(sizes) == len(data)
    assert decompress(c.to_bytes(), kind="bytes") == data


def test_bad_containers(machine):
    blob = compress(machine(100), b"x" * 100).to_bytes()
    with pytest.raises(FormatError):
        decompress(b"XXXX" + blob[4:])
    with pytest.raises(DecodeError, match=r"block \d+: payload truncated"):
        decompress(blob[:-1])
    with pytest.raises(FormatError):
        decompress(blob + b"\0")


def test_bad_arguments(machine):
    with pytest.raises(InvalidInputError):
        compress(machine(10), [0, 1], block_size=4, k_max=5, sigma=2)
    assert default_block_size(1 << 10) == 100
    assert max_order(2, 256) == 8 and max_order(1, 100) == 0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 3), max_size=400), st.integers(1, 64))
def test_round_trip_property(values, block):
    m_bits = 1 << 16
    from rwstreams.stream_machine import MachineBudget, StreamMachine
    m = StreamMachine(MachineBudget(m_bits))
    c = compress(m, values, block_size=block, sigma=4)
    assert decompress(CompressedContainer.from_bytes(c.to_bytes())).tolist() == values
    assert m.total_passes <= 1
