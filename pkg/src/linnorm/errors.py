"""Exception types shared across the package."""


class LinnormError(Exception):
    """Base class for all errors raised by linnorm."""


class BudgetExceeded(LinnormError):
    """An enumeration or search would exceed its configured budget."""


class DimensionMismatch(LinnormError, ValueError):
    """Inputs disagree on q, n, k or m."""


class NotApplicable(LinnormError):
    """A constructor's precondition does not hold for this system."""


class SearchFailed(LinnormError):
    """A falsifier searched its grid without finding a violation.

    ``diagnostics`` carries whatever the search learned (best ratio, parameters).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class RankTooHigh(LinnormError):
    """The rank <= 2 classifier was handed a system with more equations."""


class NotAGraph(LinnormError):
    """A graph-only operation received a hypergraph with r != 2."""


class ParseError(LinnormError, ValueError):
    """Malformed input file or inconsistent matrix data."""

    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.column = column
