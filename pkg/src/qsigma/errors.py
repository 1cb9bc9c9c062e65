"""Exception hierarchy shared by the series kernel, numeric backend and engine."""


class QSigmaError(Exception):
    """Base class for all errors raised by this package."""


class ContextError(QSigmaError, ValueError):
    """Malformed context, unknown variable, or series from incompatible contexts."""


class PreconditionError(QSigmaError, ValueError):
    """A mathematical precondition does not hold for the requested inputs.

    The verification engine reports these as ``precondition-error`` rather than
    as a failed identity.
    """


class NotAUnitError(PreconditionError):
    """Division by a series whose constant coefficient vanishes."""


class PoleError(PreconditionError):
    """A denominator factor vanishes (or nearly so) at the evaluation point."""


class DomainError(PreconditionError):
    """Parameter values lie outside the declared analytic domain."""


class ConvergenceError(PreconditionError):
    """A numeric summation failed its tail guard."""


class WeightError(PreconditionError):
    """A substitution would lower weights and invalidate earlier truncations."""


class BoundViolationError(QSigmaError, AssertionError):
    """A summand has a monomial below its declared lower weight bound.

    This signals a mis-declared identity builder, never bad user input.
    """
