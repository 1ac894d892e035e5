"""Exact Chevalley-Eilenberg cohomology and spectral sequences of nilpotent
Lie algebras over the rationals."""

from .lie import LieAlgebra, abelian, direct_sum, m0, parse_salamon, to_salamon
from .spectral import SpectralTable, complex_for, table_for

__version__ = "0.1.0"

__all__ = [
    "LieAlgebra",
    "SpectralTable",
    "abelian",
    "complex_for",
    "direct_sum",
    "m0",
    "parse_salamon",
    "table_for",
    "to_salamon",
    "__version__",
]
