"""Exception hierarchy shared by every statlim module.

Domain errors (bad user input) are distinguished from invariant
violations (bugs) so the service and CLI can map them to the right
status / exit code.
"""


class StatlimError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class DimensionError(StatlimError):
    """Shapes of matrix/vector operands are incompatible."""

    code = "dimension"


class ArgumentError(StatlimError):
    """An argument is outside its domain (non-prime p, non-monic poly, ...)."""

    code = "argument"


class NotPadicIntegerError(StatlimError):
    """A rational with p in its denominator cannot be reduced mod p^N."""

    code = "not_padic_integer"


class MembershipError(StatlimError):
    """A vector required to lie in the presented group does not."""

    code = "membership"


class RaisePrecisionError(StatlimError):
    """The requested precision is too low to decide the question."""

    code = "raise_precision"


class InvariantViolation(StatlimError):
    """An internal invariant failed; this signals a bug, not a user error."""

    code = "invariant"
