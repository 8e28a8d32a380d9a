"""Exception hierarchy shared by every fdbounds module."""


class FDBoundsError(Exception):
    """Base class for all library errors."""


class DomainError(FDBoundsError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedDerivative(DomainError):
    """A derivative was requested that the generator does not have."""


class AbsoluteContinuityError(DomainError):
    """A cell hits an infinite boundary limit of the generator."""


class LengthMismatch(DomainError):
    pass


class NonConvergence(FDBoundsError, ArithmeticError):
    """An iterative or adaptive routine failed to reach its tolerance."""


class ClosedFormUnavailable(FDBoundsError):
    pass


class DegenerateError(DomainError):
    """Raised when P = Q makes a quantity undefined (0/0)."""


class RatioUnbounded(FDBoundsError):
    """Condition (1) of the neighborhood definition fails on the region."""


class ZeroDivergence(DegenerateError):
    pass


class InadmissibleConstant(DomainError):
    """A user-supplied c or c-bar violates its admissibility inequality."""


InadmissibleC = InadmissibleConstant


class RegionNotFull(DomainError):
    """A full-support corollary was applied to a certificate with a complement."""


class UnknownPair(DomainError):
    pass


class ZeroCellProbability(DomainError):
    pass


class IntervalEmpty(DegenerateError):
    pass


class UnknownScenario(DomainError):
    pass


class NotCertified(FDBoundsError):
    """A bound was requested for a pair whose neighborhood conditions fail."""
