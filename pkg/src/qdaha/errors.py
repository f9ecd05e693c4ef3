"""Exception hierarchy shared by every module of the package."""


class QDahaError(Exception):
    """Base class for all errors raised by :mod:`qdaha`."""


class DomainError(QDahaError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class PoleError(QDahaError, ZeroDivisionError):
    """A denominator factor vanishes.

    ``location`` identifies the offending factor, e.g. ``(j, sign)`` for the
    product kernels or a grid point for lattice sums.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class GridPoleError(PoleError):
    """Some points of a lattice grid hit a pole; ``points`` lists them."""

    def __init__(self, message, points=()):
        super().__init__(message, location=tuple(points))
        self.points = tuple(points)


class ConvergenceError(QDahaError, ArithmeticError):
    """An iterative refinement failed to reach its tolerance."""


class UnsupportedType(QDahaError, ValueError):
    """The requested Cartan type and rank do not describe a root system."""


class InternalError(QDahaError, RuntimeError):
    """A consistency check that can only fail through a programming error."""


class NormalFormError(InternalError):
    """Rewriting into normal form did not terminate within its bound."""


class ResonanceError(QDahaError, ArithmeticError):
    """Eigenvalues collide, so the triangular eigen-solve has a zero pivot."""


class DivisionError(QDahaError, ZeroDivisionError):
    """Division by zero inside an exact field."""


class EmptyModule(QDahaError, ValueError):
    """The requested finite module has no basis vectors."""


class GridDegeneracyError(QDahaError, ArithmeticError):
    """An operator does not preserve the functions on an evaluation grid."""


class SingularBasisError(QDahaError, ArithmeticError):
    """Basis evaluation vectors turned out to be linearly dependent."""
