"""Exception types raised by the library.

Errors that indicate bad user input subclass ValueError; errors that
indicate a numerical breakdown subclass ArithmeticError, so callers can
distinguish "fix your input" from "the computation failed".
"""


class SplineProjError(Exception):
    """Base class for all library-specific errors."""


class NonMonotoneBreaks(SplineProjError, ValueError):
    """Breakpoints are not strictly increasing (or knots decrease)."""


class MultiplicityOutOfRange(SplineProjError, ValueError):
    """A knot multiplicity is below 1 or exceeds the spline order."""


class EmptyInterval(SplineProjError, ValueError):
    """The interval [a, b] is empty or degenerate (a >= b)."""


class InvalidRatio(SplineProjError, ValueError):
    """Geometric mesh ratio is not a positive real number."""


class ZeroIntervals(SplineProjError, ValueError):
    """A partition was requested with no intervals."""


class OutOfDomain(SplineProjError, ValueError):
    """An evaluation point lies outside [a, b]."""


class LengthMismatch(SplineProjError, ValueError):
    """A coefficient or multiplicity sequence has the wrong length."""


class NotPositiveDefinite(SplineProjError, ArithmeticError):
    """Banded Cholesky factorization broke down; the matrix is not SPD."""


class SymmetryViolation(SplineProjError, ArithmeticError):
    """A matrix that must be symmetric came out asymmetric beyond tolerance."""


class QuadratureNonConvergence(SplineProjError, ArithmeticError):
    """Adaptive quadrature exhausted its budget above the requested tolerance."""


class NonIntegrableMarker(SplineProjError, ValueError):
    """A declared singularity has exponent <= -1, so f is not integrable."""
