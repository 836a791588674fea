"""Finite inverse semigroups: Clifford systems, homogeneity checks and amalgamation."""
from .errors import AlgebraError, CapError, FormatError, StructureError
from .inverse import InverseSemigroup, classify, greens, natural_order, try_inverse
from .tables import SemigroupTable, make_table, parse_table, format_table, validate_table

__version__ = "0.1.0"
