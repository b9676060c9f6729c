"""Lipschitz fillings of cycles: abstract triangulations, exact metrics,
lower bounds, Menger/Sperner certificates, exhaustive search and a
balanced-triangulation pipeline for PL surfaces."""

from .complex import AbstractTriangulation, boundary, boundary_cycle, canonical_form, close_boundary, euler_characteristic, validate
from .errors import BoundaryError, BudgetExceeded, FillingError, InvariantError, MeshError, SeparationError
from .metrics import cycle_distance, is_delta_filling, lipschitz_constant

__version__ = "0.1.0"

__all__ = [
    "AbstractTriangulation",
    "BoundaryError",
    "BudgetExceeded",
    "FillingError",
    "InvariantError",
    "MeshError",
    "SeparationError",
    "boundary",
    "boundary_cycle",
    "canonical_form",
    "close_boundary",
    "cycle_distance",
    "euler_characteristic",
    "is_delta_filling",
    "lipschitz_constant",
    "validate",
]
