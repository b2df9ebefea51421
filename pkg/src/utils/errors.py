"""Exception hierarchy shared by the toolkit."""

from typing import Optional


class NonlocalityError(ValueError):
    """Base class for every error raised by the toolkit."""


class DimensionError(NonlocalityError):
    """State or operator dimensions are out of range or do not match."""


class DomainError(NonlocalityError):
    """A scalar argument lies outside its allowed domain."""


class LayoutError(NonlocalityError):
    """A measurement layout or probability table lacks what the caller needs."""


class ConditioningError(NonlocalityError):
    """A conditional correlator has an empty conditioning event."""


class SingularDenominatorError(NonlocalityError):
    """1 + <C1> is too close to zero for F to be meaningful."""


class NormalizationError(NonlocalityError):
    """A count row cannot be normalized."""


class ConfigurationError(NonlocalityError):
    """A layout or delay configuration is inconsistent."""


class InputError(NonlocalityError):
    """A required input value is missing or malformed."""


class UnsupportedError(NonlocalityError):
    """The requested operation is outside the supported feature set."""


class ParseError(NonlocalityError):
    """A data file could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
