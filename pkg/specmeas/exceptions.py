"""Exception and warning types raised by specmeas.

The three top-level branches map onto the command-line exit codes:
:class:`ConfigError` (2), :class:`NumericalError` (3) and
:class:`StatisticalFailure` (4).
"""


class SpecmeasError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ConfigError(SpecmeasError, ValueError):
    """Invalid user-supplied configuration."""

    exit_code = 2


class NumericalError(SpecmeasError, ArithmeticError):
    """A numerical contract could not be met."""

    exit_code = 3


class StatisticalFailure(SpecmeasError):
    """A statistical acceptance test rejected its null hypothesis."""

    exit_code = 4


class InvalidMeasure(NumericalError, ValueError):
    """Atoms or weights violate the atomic-measure invariants."""


class MomentSpaceViolation(NumericalError, ValueError):
    """A moment vector lies outside the moment space."""


class Degenerate(NumericalError):
    """A moment vector belongs to a measure with fewer atoms than requested."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CoefficientOutOfDisk(NumericalError, ValueError):
    """A recursion coefficient has modulus larger than one."""


class NotSymmetric(NumericalError, ValueError):
    """A circle measure is not invariant under complex conjugation."""


class RootFindingFailure(NumericalError):
    """Zeros of a terminated orthogonal polynomial left the unit circle."""


class EigensolverFailure(NumericalError):
    """An eigen-decomposition residual exceeded its tolerance."""


class OutOfRange(NumericalError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class NewtonDivergence(NumericalError):
    """A Newton iteration failed to converge."""


class GridMismatch(NumericalError, ValueError):
    """Two grid functions are not defined on the same quadrature grid."""


class InsideSpectrum(NumericalError, ValueError):
    """A Stieltjes transform was requested inside the range of the function."""


class ZeroHits(NumericalError):
    """A Monte Carlo tail estimate saw no exceedances."""

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class BinUnderflow(StatisticalFailure, ValueError):
    """A chi-square bin has an expected count below the allowed minimum."""


class CyclicityWarning(UserWarning):
    """The first basis vector is (numerically) not cyclic for a matrix."""
