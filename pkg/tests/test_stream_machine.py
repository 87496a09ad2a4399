import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rwstreams.errors import BudgetError, FormatError, InvalidInputError, PassLimitError
from rwstreams.stream_machine import (
    MachineBudget,
    StreamMachine,
    UsageReport,
    default_budget,
    merge_rounds,
    snapshot_bytes,
    snapshot_from_bytes,
    two_stream_merge_sort,
    two_streams,
)


def test_attach_up_to_capacity():
    m = StreamMachine(MachineBudget(1024, 2))
    m.attach_stream([1, 2], 4)
    m.attach_stream([], 4)
    with pytest.raises(BudgetError):
        m.attach_stream([], 4)


def test_empty_stream_reads_nothing():
    m = StreamMachine(MachineBudget(64))
    s = m.attach_stream([], 8)
    assert len(s.read_all()) == 0
    with pytest.raises(EOFError):
        s.read()


def test_declare_memory():
    m = StreamMachine(MachineBudget(1024))
    m.declare_memory(0)
    assert m.peak_declared_memory_bits == 0
    m.declare_memory(512)
    assert m.peak_declared_memory_bits == 512
    with pytest.raises(BudgetError):
        m.declare_memory(2048)


def test_bad_budgets():
    with pytest.raises(InvalidInputError):
        MachineBudget(0)
    with pytest.raises(InvalidInputError):
        MachineBudget(8, 0)


def test_pass_counting_single_steps():
    m = StreamMachine(MachineBudget(64))
    s = m.attach_stream([1, 2, 3], 2)
    assert [s.read(), s.read()] == [1, 2]
    s.reverse()
    assert s.read() == 2
    s.rewind()
    assert s.passes_completed == 2
    s.rewind()          # no movement since the last boundary
    assert m.total_passes == 2


def test_write_appends_and_overwrites():
    m = StreamMachine(MachineBudget(64))
    s = m.attach_stream([1, 2], 4)
    s.write(7)
    s.skip(1)
    s.write(9)
    s.rewind()
    assert s.read_all().tolist() == [7, 2, 9]


def test_pass_limit():
    m = StreamMachine(MachineBudget(64, 1, pass_limit=2))
    s = m.attach_stream([1], 1)
    s.read_all()
    s.read_all()
    with pytest.raises(PassLimitError):
        s.read_all()


def test_default_budget():
    assert default_budget(10).memory_bits == 64 * 64
    assert default_budget(1 << 20).memory_bits == 64 * 21 * 21


def test_sort_fits_in_memory():
    m = StreamMachine(MachineBudget(3 * 4))
    a, b = two_streams(m, [3, 1, 2], 4)
    out = two_stream_merge_sort(m, a, b)
    assert out.read_all().tolist() == [1, 2, 3]
    assert merge_rounds(3, 3) == 0


def test_sort_rounds_match_formula():
    m = StreamMachine(MachineBudget(64 * 16))
    rng = np.random.default_rng(0)
    data = rng.integers(0, 1 << 16, 1024)
    a, b = two_streams(m, data, 16)
    out = two_stream_merge_sort(m, a, b)
    assert out.read_all().tolist() == sorted(data.tolist())
    assert merge_rounds(1024, 64) == 4
    # formation pass + 4 merge rounds, each a pass on both tapes, plus the final read
    assert m.total_passes == 2 * (4 + 1) + 1


def test_sort_is_stable():
    m = StreamMachine(MachineBudget(4 * 8))
    rows = np.array([[5, 0], [5, 1], [1, 2], [5, 3], [0, 4]])
    a, b = two_streams(m, rows, 8)
    out = two_stream_merge_sort(m, a, b, key=lambda r: r[:, 0])
    assert out.read_all().tolist() == [[0, 4], [1, 2], [5, 0], [5, 1], [5, 3]]


def test_sort_needs_two_record_runs():
    m = StreamMachine(MachineBudget(8))
    a, b = two_streams(m, [1, 2, 3], 8)
    with pytest.raises(BudgetError):
        two_stream_merge_sort(m, a, b)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 255), max_size=300), st.integers(6, 40))
def test_sort_property(values, run):
    m = StreamMachine(MachineBudget(run * 8))
    a, b = two_streams(m, values, 8)
    out = two_stream_merge_sort(m, a, b)
    assert out.read_all().tolist() == sorted(values)
    n = len(values)
    assert m.total_passes <= 2 * (merge_rounds(n, run) + 1) + 1


def test_snapshot_round_trip(tmp_path):
    data = np.array([0, 5, 7, 1])
    assert snapshot_from_bytes(snapshot_bytes(data, 3))[0].tolist() == data.tolist()
    m = StreamMachine(MachineBudget(64))
    s = m.attach_stream(data, 3)
    s.save(tmp_path / "t.bin")
    s.restore(tmp_path / "t.bin")
    assert s.read_all().tolist() == data.tolist()
    with pytest.raises(FormatError):
        snapshot_from_bytes(b"xx")


def test_report_json_round_trip():
    m = StreamMachine(MachineBudget(64))
    s = m.attach_stream([1, 2], 2)
    s.read_all()
    rep = m.report()
    assert UsageReport.from_json(rep.to_json()) == rep
    assert rep.total_passes == 1 and rep.records_read == 2
