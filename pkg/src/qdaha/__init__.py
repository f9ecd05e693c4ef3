"""Double affine Hecke algebras, q-Gaussian integrals and sums, and their root-of-unity versions."""

from .coefficients import CoefficientDomain, CyclotomicDomain, ExactDomain, NumericDomain
from .errors import QDahaError
from .qseries import LaurentPolynomial, QContext, QSeries
from .rootdata import MultiplicityFunction, build_root_system

__all__ = [
    "CoefficientDomain",
    "CyclotomicDomain",
    "ExactDomain",
    "LaurentPolynomial",
    "MultiplicityFunction",
    "NumericDomain",
    "QContext",
    "QDahaError",
    "QSeries",
    "build_root_system",
]
__version__ = "0.1.0"
