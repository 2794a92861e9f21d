"""Exception types shared across the package.

The CLI maps these onto exit codes: input/validation problems exit 1,
internal faults exit 2, audit failures exit 3.
"""


class LatfreeError(Exception):
    """Base class for all package-specific errors."""


class ExprSyntaxError(LatfreeError):
    """Raised when expression text cannot be parsed; carries a position."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ArityError(LatfreeError):
    """A variable index exceeds the declared arity, or arities disagree."""


class DimensionError(LatfreeError):
    """Vector or matrix dimensions do not match the declared ambient space."""


class UnboundedRegionError(LatfreeError):
    """A region that must be bounded admits an unbounded direction."""


class UnsupportedSpaceError(LatfreeError):
    """The requested operation needs a polyhedral space kind."""


class InternalFaultError(LatfreeError):
    """A checked internal invariant failed; indicates a bug, not bad input."""
