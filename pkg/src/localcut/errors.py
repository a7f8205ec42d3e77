"""Exception hierarchy shared across the package."""


class LocalCutError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(LocalCutError):
    """A parameter is outside its valid range for the given instance."""


class GraphFormatError(LocalCutError):
    """A graph or seed-set file could not be parsed.

    ``line`` is the 1-based line number of the offending input line, when
    known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NotACertificateError(LocalCutError):
    """The supplied object does not meet the certificate precondition."""


class InvariantViolation(LocalCutError):
    """An internal runtime invariant failed; this indicates a bug."""
