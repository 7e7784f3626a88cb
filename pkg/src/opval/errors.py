"""Exception types shared across the package."""


class OpvalError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(OpvalError):
    """Input data is malformed: non-finite entries, support violations, ..."""


class InvalidParameter(OpvalError):
    """A numeric parameter is outside its admissible range."""


class NotPositive(OpvalError):
    """A matrix required to be positive (semi)definite is not."""


class ShapeError(OpvalError):
    """Operands live on incompatible grids or have mismatched dimensions."""


class Unsupported(OpvalError):
    """The requested operation is not defined for this basis or mode."""


class TooLarge(OpvalError):
    """An exact enumeration would exceed the hard size cap."""


class ParseError(OpvalError):
    """A document does not match the expected schema.

    ``field`` names the offending field (dotted/indexed path) when known.
    """

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(message if field is None else f"{field}: {message}")
