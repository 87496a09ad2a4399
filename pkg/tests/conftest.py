import pytest

from rwstreams.stream_machine import MachineBudget, StreamMachine, default_budget


@pytest.fixture
def machine():
    def make(n=1 << 12, streams=2, memory_bits=None, pass_limit=None):
        if memory_bits is None:
            return StreamMachine(default_budget(n, streams, pass_limit))
        return StreamMachine(MachineBudget(memory_bits, streams, pass_limit))
    return make


def pytest_terminal_summary(terminalreporter):
    import sys

    lines = []
    for name, module in list(sys.modules.items()):
        if name.rsplit(".", 1)[-1] == "test_acceptance":
            lines = getattr(module, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
