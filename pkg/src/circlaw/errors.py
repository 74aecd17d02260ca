"""Exception types raised across the package."""


class CirclawError(Exception):
    """Base class for package errors."""


class InvalidArgument(CirclawError, ValueError):
    pass


class InvalidDimension(InvalidArgument):
    pass


class UnsupportedEnsemble(CirclawError, ValueError):
    pass


class NonConvergence(CirclawError, RuntimeError):
    """QR iteration ran out of sweeps; carries the partial spectrum."""

    def __init__(self, message, partial=None, sweeps=0, remaining=0):
        super().__init__(message)
        self.partial = partial
        self.sweeps = sweeps
        self.remaining = remaining


class EnvelopeFailure(CirclawError, RuntimeError):
    """Rejection sampling acceptance fell below the configured floor."""

    def __init__(self, message, level=None, proposals=0):
        super().__init__(message)
        self.level = level
        self.proposals = proposals


class ComplexityError(CirclawError, ValueError):
    """Request exceeds an enumeration guard (surjections, Schur degree)."""


class HypothesisViolation(CirclawError, ValueError):
    """Closed-form lemma requested for a functional outside its hypotheses."""


class CapabilityError(CirclawError, TypeError):
    """Test function lacks a callback needed by the requested computation."""


class DomainError(CirclawError, ValueError):
    pass


class TruncationFailure(CirclawError, RuntimeError):
    """Fourier tail did not decay below tolerance by the truncation index."""


class ConsistencyError(CirclawError, AssertionError):
    """Two independent routes to the same quantity disagreed."""


class SamplerFailure(CirclawError, RuntimeError):
    pass


class NumericError(CirclawError, ArithmeticError):
    pass
