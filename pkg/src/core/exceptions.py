class FracMusielakError(Exception):
    """Base class of every error raised by the library."""


class DomainError(FracMusielakError, ValueError):
    """An argument lies outside the domain of an operation (non-finite values, orders out of range)."""


class PreconditionError(FracMusielakError, ValueError):
    """An operation was called on input that violates its stated precondition."""


class InvariantViolationError(FracMusielakError):
    """Sampled data contradicts a declared structural property of a Musielak function."""


class ConfigError(FracMusielakError):
    """The run configuration failed schema validation."""


class GeometryFailureError(FracMusielakError):
    """No admissible mountain-pass geometry (rim radius or far endpoint) was found."""


class NumericalFailureError(FracMusielakError, ArithmeticError):
    """A computation produced NaN or hit a singular system."""
