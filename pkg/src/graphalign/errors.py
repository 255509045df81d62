"""Exception hierarchy shared by every stage of the toolkit.

The command-line driver maps these onto process exit codes:
usage errors exit 1, data errors exit 2, numeric failures exit 3.
"""


class GraphAlignError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(GraphAlignError):
    """Invalid invocation: bad flags, impossible option combinations."""


class DataError(GraphAlignError, ValueError):
    """Invalid input data: shapes, ranges, unknown labels, bad files."""


class ParseError(DataError):
    """Malformed text input; carries a line number when one is known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line


class NumericError(GraphAlignError, ArithmeticError):
    """Non-finite values encountered during optimization.

    ``snapshot`` optionally carries the most recent training record so the
    failure point can be inspected.
    """

    def __init__(self, message, snapshot=None):
        super().__init__(message)
        self.snapshot = snapshot
