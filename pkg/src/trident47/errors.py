"""Exception types shared across the toolkit."""


class TridentError(Exception):
    """Base class for all toolkit errors."""


class ChartMismatch(TridentError):
    """An operation received points or fields from the wrong chart."""


class DivisionByZero(TridentError):
    """A quotient denominator is (numerically) zero at the evaluation point."""


class SingularConfiguration(TridentError):
    """The configuration violates l2 != 0, L != 0 or a frame gauge condition."""


class DegenerateGrowth(TridentError):
    """The bracket-generated distribution does not fill the tangent space."""


class NotASymmetry(TridentError):
    """A field failed an infinitesimal-symmetry condition.

    Carries the offending residual field (a VectorFieldSym) in ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ZeroCombination(TridentError):
    """A linear combination that must be nonzero was zero."""


class ZeroHorizontalMomentum(TridentError):
    """Arc-length normalization of an all-zero horizontal momentum."""
