import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rwstreams.errors import InvalidInputError
from rwstreams.periodicity_grammar import (
    Grammar,
    build_periodic_grammar,
    expand_grammar,
    grammar_size_bits,
    min_period_many,
    min_period_oracle,
    min_period_streams,
)


def test_oracle_examples():
    assert min_period_oracle("abcabcab") == 3
    assert min_period_oracle("aaaa") == 1
    assert min_period_oracle("abcd") == 4
    with pytest.raises(InvalidInputError):
        min_period_oracle("")


def test_stream_examples(machine):
    assert min_period_streams(machine(), "ab" * 2048) == 2
    assert min_period_streams(machine(), "a") == 1
    assert min_period_streams(machine(), "abaa") == 3
    assert min_period_streams(machine(), "abcabcab") == 3


def test_exhaustive_small(machine):
    texts = ["".join(p) for n in range(1, 11) for p in itertools.product("ab", repeat=n)]
    got = min_period_many(machine(sum(map(len, texts))), texts)
    assert got == [min_period_oracle(t) for t in texts]


@settings(max_examples=60, deadline=None)
@given(st.text("abc", min_size=1, max_size=20), st.integers(1, 200))
def test_planted_period(base, n):
    from rwstreams.stream_machine import StreamMachine, default_budget
    s = (base * (n // len(base) + 1))[:max(n, 1)]
    assert min_period_streams(StreamMachine(default_budget(len(s))), s) == min_period_oracle(s)


def test_grammar_examples():
    g = build_periodic_grammar("ab" * 8, 2)
    assert expand_grammar(g) == "ab" * 8
    assert g.productions["S1"] == ["A3"]
    g = build_periodic_grammar("aaaa", 1)
    assert expand_grammar(g) == "aaaa"
    assert sum(name.startswith("A") for name in g.productions) == 2
    g = build_periodic_grammar("abcab", 3)
    assert g.productions["S2"] == [0, 1, 2] and g.productions["S3"] == [0, 1]
    assert expand_grammar(g) == "abcab"
    assert g.to_text().splitlines()[0] == "S0: S1 S3"


def test_grammar_size_single_production():
    g = Grammar({"S": [0, 1, 2]}, "S", sigma=3)
    assert grammar_size_bits(g) == 3 * math.ceil(math.log2(1 + 3))


def test_grammar_errors():
    with pytest.raises(InvalidInputError):
        build_periodic_grammar("abcab", 2)
    with pytest.raises(InvalidInputError):
        expand_grammar(Grammar({"S": ["T"], "T": ["S"]}, "S"))
    with pytest.raises(InvalidInputError):
        expand_grammar(Grammar({"S": ["U"]}, "S"))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=12), st.integers(1, 500))
def test_grammar_expands_and_stays_small(t, n):
    s = np.resize(np.array(t), max(n, len(t)))
    ell = min_period_oracle(s)
    g = build_periodic_grammar(s, ell)
    assert np.array_equal(expand_grammar(g), s)
    rhs = sum(len(r) for r in g.productions.values())
    assert rhs <= 2 * ell + 3 * math.log2(len(s)) + 3
