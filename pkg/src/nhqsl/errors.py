"""Exception hierarchy shared by every module."""


class NhqslError(Exception):
    """Base class for all package errors."""


class NumericalDomainError(NhqslError):
    """Input lies outside the domain where the numerics are meaningful."""


class DefectiveMatrix(NumericalDomainError):
    """Eigenvector matrix is numerically rank deficient (exceptional point)."""


class Degenerate(NumericalDomainError):
    """Two eigenvalues are closer than the non-degeneracy threshold."""


class NonSquare(NhqslError, ValueError):
    pass


class DimensionMismatch(NhqslError, ValueError):
    pass


class NoBracket(NumericalDomainError):
    """The function has the same sign at both ends of the interval."""


class ZeroState(NumericalDomainError):
    pass


class Underflow(NumericalDomainError):
    pass


class NegativeRadicand(NumericalDomainError):
    """Square-root argument is negative beyond the clamping tolerance.

    The offending quantities are kept on the instance for triage.
    """

    def __init__(self, msg, t=None, radicand=None, components=None):
        super().__init__(msg)
        self.t = t
        self.radicand = radicand
        self.components = components


class ZeroBandwidth(NumericalDomainError):
    pass


class BadOrdering(NhqslError, ValueError):
    pass


class DenominatorSignFlip(NumericalDomainError):
    pass
