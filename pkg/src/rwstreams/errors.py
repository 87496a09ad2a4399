"""Exception hierarchy shared by every module."""


class RWStreamsError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class BudgetError(RWStreamsError):
    """A machine budget (streams or memory bits) would be exceeded."""

    exit_code = 3


class PassLimitError(RWStreamsError):
    """The machine's pass limit was exceeded."""

    exit_code = 4


class FormatError(RWStreamsError):
    """A file or container has a bad magic number, version or layout."""

    exit_code = 5


class DecodeError(RWStreamsError):
    """A payload could not be decoded (truncated or corrupt)."""

    exit_code = 6


class InvalidInputError(RWStreamsError, ValueError):
    """An argument violates an operation's precondition."""

    exit_code = 7
