"""Exception hierarchy shared by the library and the command-line tool."""


class QSPError(Exception):
    """Base class for all library errors."""


class ZeroConstantTerm(QSPError, ValueError):
    """Target polynomial has p_0 = 0; strip the z**k factor first."""


class SupNormExceedsOne(QSPError, ValueError):
    """Target polynomial exceeds modulus one somewhere on the unit circle."""


class OddCircleMultiplicity(QSPError):
    """A root cluster of 1 - |P|^2 on the circle has odd total multiplicity."""


class NonPositiveRatio(QSPError):
    """The deflated ratio (1 - |P|^2) / |Q0|^2 is not positive on the grid."""


class NoConvergence(QSPError):
    """The grid-doubling loop hit ``n_max`` before meeting its tolerances.

    The best diagnostics gathered so far are attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DivisionByZeroQ0(QSPError, ZeroDivisionError):
    pass


class NearZeroOnContour(QSPError):
    pass


class ParityViolation(QSPError):
    """Inversion polynomial coefficients are not odd to tolerance."""


class DegreeTooHigh(QSPError, ValueError):
    pass


class LeadingCoefficientZero(QSPError, ValueError):
    pass


class UnpairedRoots(QSPError):
    pass


class ZeroPolynomial(QSPError, ValueError):
    pass
