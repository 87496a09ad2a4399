import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rwstreams.errors import InvalidInputError
from rwstreams.sort_reduction import (
    SortInstance,
    decode_sorted,
    encode_instance,
    encoded_length,
    index_bits,
    position_bits,
    sort_numbers,
    sort_via_bwt,
    value_bits,
)


def test_field_widths():
    assert (value_bits(4), index_bits(4), position_bits(4)) == (4, 2, 2)
    assert (value_bits(256), index_bits(256), position_bits(256)) == (16, 8, 4)


def test_encoding_shape():
    s = encode_instance(SortInstance(4, (5, 3, 12, 3)))
    assert len(s) == encoded_length(4) == 2 * 4 * 2 * 10
    assert set(s.tolist()) == {0, 1, 2}
    # only phrase-leading bits precede a 2
    before = np.flatnonzero(s[1:] == 2)
    assert np.all(before % 10 == 0)


def test_zero_instance():
    s = encode_instance(SortInstance(2, (0, 0))).reshape(4, -1)
    assert np.all(s[:, 0] == 0) and np.all(s[:, 2:4] == 0)


def test_sort_examples(machine):
    assert sort_via_bwt(machine(200), SortInstance(4, (5, 3, 12, 3))) == [3, 3, 5, 12]
    assert sort_via_bwt(machine(200), SortInstance(4, (7, 7, 7, 7))) == [7, 7, 7, 7]


def test_decode_examples():
    assert decode_sorted("0011 0011 0101 1100", 4) == [3, 3, 5, 12]
    assert decode_sorted("0" * 16, 4) == [0, 0, 0, 0]
    with pytest.raises(InvalidInputError):
        decode_sorted("0101", 4)


def test_instance_validation():
    with pytest.raises(InvalidInputError):
        SortInstance(3, (0, 0, 0))
    with pytest.raises(InvalidInputError):
        SortInstance(4, (16, 0, 0, 0))


def test_padding(machine):
    assert sort_numbers(machine(), [9, 1, 100, 3, 3]) == [1, 3, 3, 9, 100]
    assert sort_numbers(machine(), []) == []


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 4, 8, 16]), st.data())
def test_sort_property(n, data):
    from rwstreams.stream_machine import StreamMachine, default_budget
    values = tuple(data.draw(st.lists(st.integers(0, n * n - 1), min_size=n, max_size=n)))
    inst = SortInstance(n, values)
    assert sort_via_bwt(StreamMachine(default_budget(encoded_length(n))), inst) == sorted(values)
