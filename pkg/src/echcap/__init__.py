"""Exact ECH capacities of concave toric domains, quasi-flat families, and
symplectic Banach-Mazur distance certificates."""

from .geometry import Ellipsoid, MomentProfile, area, inclusion_scale, scale
from .weights import WeightMultiset, ellipsoid_weights, realize, weight_expansion

__all__ = [
    "Ellipsoid",
    "MomentProfile",
    "WeightMultiset",
    "area",
    "ellipsoid_weights",
    "inclusion_scale",
    "realize",
    "scale",
    "weight_expansion",
]

__version__ = "0.1.0"
