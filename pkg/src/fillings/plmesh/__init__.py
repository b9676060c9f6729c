"""PL metric surfaces and their balanced triangulations."""

from .pipeline import BalancedMesh, balanced_triangulation, k_for_epsilon, mesh_filling_report
from .surface import PLSurface, heron_area, validate_surface

__all__ = [
    "BalancedMesh",
    "PLSurface",
    "balanced_triangulation",
    "heron_area",
    "k_for_epsilon",
    "mesh_filling_report",
    "validate_surface",
]
