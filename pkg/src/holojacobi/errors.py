"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for all errors raised by holojacobi."""


class ParseError(GeometryError, ValueError):
    """Syntax error in an expression or structure file.

    ``offset`` is the character position of the problem, ``source`` the
    offending text (if known).
    """

    def __init__(self, message, offset=None, source=None):
        self.message = message
        self.offset = offset
        self.source = source
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


class UnknownIdentifierError(ParseError):
    pass


class ChartMismatchError(GeometryError, ValueError):
    pass


class DegreeError(GeometryError, ValueError):
    pass


class CompatibilityError(GeometryError):
    """Raised when a compatibility precondition (e.g. pi# phi* = phi pi#) fails."""

    def __init__(self, message, entry=None, value=None):
        self.entry = entry
        self.value = value
        super().__init__(message)


class ExtractionError(GeometryError):
    """An evaluator is not a first-order multiderivation."""


class DegeneracyError(GeometryError):
    pass


class ValidationError(GeometryError):
    """A structure failed a required validation step."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)
