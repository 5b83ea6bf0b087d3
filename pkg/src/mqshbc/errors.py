"""Exception hierarchy.

Validation problems (bad input, bad files, bad geometry) derive from
``ValidationError`` and map to CLI exit code 1.  Failures discovered while
computing (singular circuits, violated numerical invariants) derive from
``NumericalError`` and map to exit code 2.
"""


class MQSError(Exception):
    """Base class for all package errors."""


class ValidationError(MQSError, ValueError):
    """Invalid input value, file or configuration."""


class ParseError(ValidationError):
    """Malformed text input; carries the 1-based line number when known."""

    def __init__(self, message, lineno=None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


class InvariantViolation(ValidationError):
    """A parameter violates a model invariant; ``field`` names the culprit."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class FrequencyRangeError(ValidationError):
    """Frequency outside the domain where an operation is defined."""


class GeometryError(ValidationError):
    """Coil geometry that cannot be evaluated (intersecting or degenerate)."""


class ThinWireError(GeometryError):
    """Wire too thick for the thin-wire self-inductance formula."""


class ConventionError(ValidationError):
    """Requested conversion is undefined for the given terminations."""


class LookupFailure(ValidationError, KeyError):
    """Unknown tissue or scenario name."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class NumericalError(MQSError, ArithmeticError):
    """Computation failed or produced an inconsistent result."""


class SingularityError(NumericalError):
    """Circuit determinant vanishes at the given frequency."""

    def __init__(self, frequency, message="zero total loop impedance"):
        self.frequency = frequency
        super().__init__(f"{message} at f = {frequency!r} Hz")


class ConsistencyError(NumericalError):
    """Internal consistency check failed (signals a numerics bug)."""
