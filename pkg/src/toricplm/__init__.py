"""Exact computations with toric vector bundles viewed as piecewise linear maps to buildings."""

from .building import Frame, Prevaluation, adapted_prevaluation, leq, lt
from .chern import PiecewisePolynomial, chern_class, elementary_symmetric_value, equivalent_mod_linear
from .fan import Fan, hirzebruch, product_p1, projective_space
from .plmap import (
    IncompatibleError,
    PLMap,
    RayFiltrationData,
    compatibility_solve,
    ray_filtrations,
    tensor,
)
from .positivity import is_ample, is_globally_generated, is_nef, wall_splitting

__all__ = [
    "Fan", "Frame", "IncompatibleError", "PLMap", "PiecewisePolynomial", "Prevaluation",
    "RayFiltrationData", "adapted_prevaluation", "chern_class", "compatibility_solve",
    "elementary_symmetric_value", "equivalent_mod_linear", "hirzebruch", "is_ample",
    "is_globally_generated", "is_nef", "leq", "lt", "product_p1", "projective_space",
    "ray_filtrations", "tensor", "wall_splitting",
]
