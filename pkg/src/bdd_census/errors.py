"""Exception hierarchy shared by the library and the command line."""


class BddCensusError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BddCensusError, ValueError):
    """An argument is outside the domain of the requested operation."""


class BudgetExceeded(BddCensusError):
    """A configured size, memory or stream guard would be exceeded."""


class ParseError(DomainError):
    """Malformed BDD text input; ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
