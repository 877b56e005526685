"""Exception hierarchy.

Validation errors derive from ``ValueError`` so that ordinary argument
checking code can catch them. Numerical failures derive from
``NumericalFailure``; the command line maps those to exit code 2.
"""


class LatticeWHError(Exception):
    """Base class for every error raised by the package."""


class InvalidInput(LatticeWHError, ValueError):
    """Malformed or out-of-range input."""


class NumericalFailure(LatticeWHError, ArithmeticError):
    """A computation could not be completed to the requested accuracy."""


# lattice geometry
class NonRectilinearBoundary(InvalidInput):
    """Boundary node whose cell pattern matches no supported case."""


class DegenerateExtent(InvalidInput):
    """Domain side with fewer than three nodes."""


class MissingNeighborValue(InvalidInput):
    """A stencil references a node where the field has no value."""


class UnsupportedClass(InvalidInput):
    """Boundary class not supported by the requested operation."""


class DomainClassificationFailed(InvalidInput):
    """Boundary classification failed somewhere on the domain."""


# dispersion
class OnCut(NumericalFailure):
    """Point lies on a branch cut of the root selection."""


# catalog
class KernelSingular(NumericalFailure):
    """Kernel evaluated at one of its zeros or poles."""


class AtIncidencePole(NumericalFailure):
    """Forcing evaluated at the incidence pole."""


class ArityMismatch(InvalidInput):
    """Wrong number of arguments for a generating function."""


class NotApplicable(InvalidInput):
    """Operation not defined for this problem or side."""


class NotKhrapkov(InvalidInput):
    """Kernel is not of Khrapkov commutative form."""


# solver
class NonzeroIndex(NumericalFailure):
    """Kernel has nonzero winding number on the contour."""


class KernelVanishesOnContour(NumericalFailure):
    """Kernel has a zero on (or numerically at) the contour."""


class SlowCoefficientDecay(NumericalFailure):
    """Fourier coefficients do not decay to the required level."""


class QuadratureNotConverged(NumericalFailure):
    """Contour quadrature did not converge."""


# oracle
class SingularSystem(NumericalFailure):
    """Assembled sparse system is singular."""


class ExtentTooSmall(InvalidInput):
    """Truncation box too small for the requested sample window."""
