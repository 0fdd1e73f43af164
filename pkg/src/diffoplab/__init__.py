"""Exact-arithmetic laboratory for differential operators on modules over
finite-dimensional algebras: commutative, graded, and noncommutative
flavors side by side, with the comparison machinery that tells them apart.
"""

__version__ = "0.1.0"

from .algebra import AlgebraElement, FiniteAlgebra, catalog
from .bimodule import Bimodule, free_module, regular_bimodule
from .fields import Field, field_from_name
from .homspace import HomSpace, LinMap
from .linalg import Matrix, Subspace

__all__ = [
    "AlgebraElement",
    "Bimodule",
    "Field",
    "FiniteAlgebra",
    "HomSpace",
    "LinMap",
    "Matrix",
    "Subspace",
    "catalog",
    "field_from_name",
    "free_module",
    "regular_bimodule",
    "__version__",
]
