"""Exception and warning types shared across the package."""


class BFRankError(Exception):
    """Base class for all errors raised by bfrank."""


class DomainError(BFRankError, ValueError):
    """An argument lies outside the domain of a numerical kernel."""


class ParseError(BFRankError, ValueError):
    """Malformed input text. Carries the 1-based line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{loc}: {message}"
        super().__init__(message)


class StructuralError(BFRankError, ValueError):
    """Inputs parse cleanly but are inconsistent with each other."""


class UnsupportedMethodError(BFRankError, ValueError):
    """The requested oracle method cannot handle these inputs."""


class ConvergenceError(BFRankError, RuntimeError):
    """Numerical integration did not reach the requested tolerance."""


class CountDataWarning(UserWarning):
    """Suspicious but valid count data (empty samples, degenerate configs)."""
