"""Exception types shared across the library.

Every failure mode has its own class so callers can distinguish "the input
is outside the function's domain" from "the numerics gave up".
"""


class ArgError(ValueError):
    """An argument violates a structural precondition (range, coprimality, ordering)."""


class DomainError(ValueError):
    """The input lies outside the analytic domain of the requested function,
    e.g. on a branch cut or outside an analyticity strip."""


class PrecisionExhausted(RuntimeError):
    """Adaptive precision escalation hit its ceiling without two consecutive
    evaluations agreeing to the requested tolerance."""

    def __init__(self, message, last_value=None, last_prec_bits=None):
        super().__init__(message)
        self.last_value = last_value
        self.last_prec_bits = last_prec_bits


class QuadratureFailure(RuntimeError):
    """An adaptive quadrature could not meet its tolerance within its
    evaluation budget."""


class PathFailure(RuntimeError):
    """Descent tracing left the analyticity strip before reaching the
    required depth."""


class AssertionFailure(RuntimeError):
    """A verification campaign assertion failed; carries the offending points."""

    def __init__(self, message, offenders=None):
        super().__init__(message)
        self.offenders = offenders or []
