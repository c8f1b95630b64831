"""Exception hierarchy for column subset selection."""


class CsspError(Exception):
    """Base class for all errors raised by :mod:`cssx`."""


class ZeroMatrixError(CsspError, ValueError):
    pass


class NonFiniteError(CsspError, ValueError):
    pass


class InvalidSelectionError(CsspError, ValueError):
    pass


class RankDeficientError(CsspError, ValueError):
    pass


class SampleRankLossError(CsspError, RuntimeError):
    """The sampled ``k x c`` matrix lost rank; retry with another seed."""


class NonTerminationError(CsspError, RuntimeError):
    pass


class AllTrialsFailedError(CsspError, RuntimeError):
    pass


class BudgetExceededError(CsspError, RuntimeError):
    pass


class ParseError(CsspError, ValueError):
    """Malformed matrix file. ``line`` and ``column`` are 1-based."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
