"""Exception hierarchy.

Numerical breakdowns that a caller can recover from by changing coordinates
(``NearZeroLeadingCoefficient``, ``ReductionResidual``, ``NeedsRotation``,
``TangentIsCoordinateLine``) derive from :class:`RetryableError`; the
dispatcher in :mod:`detrep.representation` catches those and rotates.
"""


class DetRepError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DetRepError, ValueError):
    """Malformed polynomial or representation file."""


class UnsupportedDegree(DetRepError, ValueError):
    """Degree outside the supported range 2..5."""


class DegenerateInput(DetRepError, ValueError):
    """Zero polynomial or otherwise unusable input."""


class RetryableError(DetRepError, ArithmeticError):
    """Failure that a change of coordinates is expected to cure."""


class NearZeroLeadingCoefficient(RetryableError):
    """The coefficient at x^n vanishes, i.e. (1, 0, 0) lies on the curve."""


class ReductionResidual(RetryableError):
    """The difference p - a*prod(...) is not divisible by yz numerically."""


class NeedsRotation(RetryableError):
    """No admissible choice of the lines in slots 3 and 4 for a quintic."""


class TangentIsCoordinateLine(RetryableError):
    """Tangent at (1, 0, 0) is y = 0 or z = 0; the tangent reduction fails."""


class SingularPoint(RetryableError):
    """(1, 0, 0) is a singular point of the curve."""


class ConstructionFailed(RetryableError):
    """Every construction strategy failed for the current coordinates."""


class RetriesExhausted(DetRepError, ArithmeticError):
    """No change of coordinates produced a verified representation."""


class NotDecomposable(DetRepError, ValueError):
    """The conic has full rank and is not a product of two lines."""


class ZeroConic(DetRepError, ValueError):
    """The conic is numerically zero."""


class SingularDelta0(DetRepError, ArithmeticError):
    """The operator determinant Delta_0 is numerically singular."""

    def __init__(self, sigma_ratio):
        self.sigma_ratio = sigma_ratio
        super().__init__(
            f"Delta_0 is numerically singular (sigma_min/sigma_max = {sigma_ratio:.3e}); "
            "the two-parameter problem is singular, which happens e.g. when the two "
            "polynomials share a common factor or have a common root at infinity. "
            "Solving singular two-parameter problems needs staircase-type methods, "
            "which this package does not implement. Try removing common factors or "
            "applying a projective change of variables first."
        )
