"""Exception hierarchy.

Errors fall in three families that the command-line front end maps onto
exit codes: malformed input (2), a mathematical "no" (1), and numerical
breakdown (3).
"""


class LoewnerError(Exception):
    """Base class for all errors raised by this package."""


class InputError(LoewnerError, ValueError):
    """Malformed input: wrong shape, asymmetric, non-finite, bad file."""


class DomainError(LoewnerError):
    """The input is well formed but the requested object does not exist."""


class NumericalError(LoewnerError, ArithmeticError):
    """Floating point breakdown or borderline decisions."""


class NotPositiveSemidefinite(DomainError):
    pass


class NotContractive(DomainError):
    pass


class NotInGroup(DomainError):
    pass


class NotMaximal(DomainError):
    pass


class NotNegativeDefinite(DomainError):
    pass


class Infeasible(DomainError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotPsdResult(DomainError):
    pass


class NotAnEllipsoid(DomainError):
    pass


class EmptyBoundary(DomainError):
    pass


class UnsupportedDimension(InputError):
    pass


class ToleranceInconsistency(NumericalError):
    pass


class DegenerateIntersection(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass
