"""Exception and warning types shared across the package."""


class IvsqrtError(Exception):
    """Base class for all package errors."""


class DomainError(IvsqrtError, ValueError):
    """Argument outside the domain of an operation (t <= 0, Delta0 = 0, ...)."""


class ConventionError(IvsqrtError, ValueError):
    """Scattering quantities require Delta0 > 0."""


class PoleError(IvsqrtError, ZeroDivisionError):
    """Gamma evaluated at a non-positive integer."""


class ParameterPole(IvsqrtError, ValueError):
    """Kummer M called with b a non-positive integer."""


class NoConvergence(IvsqrtError, ArithmeticError):
    """A series did not reach the requested tolerance."""


class SingularMatch(IvsqrtError, ArithmeticError):
    """Initial-value matching system is numerically singular."""


class UnsupportedClass(IvsqrtError, NotImplementedError):
    """Bi-confluent Heun class other than k = 1 requested."""


class DegenerateRecurrence(IvsqrtError, ArithmeticError):
    """Leading recurrence coefficient vanished before termination."""


class TruncationError(IvsqrtError, ArithmeticError):
    """Non-terminating series whose tail exceeds the tolerance."""


class StepLimitExceeded(IvsqrtError, RuntimeError):
    pass


class ToleranceUnachievable(IvsqrtError, RuntimeError):
    pass


class SectorWarning(UserWarning):
    """Hermite evaluation returned a value whose error estimate exceeds rel_tol."""
