"""Exception hierarchy shared by every module."""


class CovcalcError(Exception):
    """Base class for all errors raised by covcalc."""


class InvalidInputError(CovcalcError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(InvalidInputError):
    """A point or operator lies outside the admissible domain."""


class PoleError(CovcalcError, ZeroDivisionError):
    """Evaluation hit (or came too close to) a pole."""


class DimensionMismatchError(InvalidInputError):
    """Operands of different dimension were combined."""


class GridMismatchError(InvalidInputError):
    """Sampled functions live on different quadrature grids."""


class DivergentIntegralError(CovcalcError):
    """The requested integral has no finite value without regularization."""


class NumericalError(CovcalcError, ArithmeticError):
    """A computation became numerically unreliable (ill-conditioning)."""


class ParseError(InvalidInputError):
    """Surface-syntax error; ``position`` is the 0-based offset in the source."""

    def __init__(self, message, position=None, source=None):
        self.position = position
        self.source = source
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class NormViolationError(DomainError):
    """An operator argument fails the certified norm bound."""
