"""Curves, handlebodies and finite covers on closed oriented surfaces."""

from .covers import (
    CoverError,
    FiniteCover,
    FiniteGroupRep,
    build_cover,
    elevate,
    extends_to_handlebody_cover,
    hom_from_intersection,
    lift_degree,
)
from .curves import (
    CurveDiagram,
    CurveError,
    algebraic_intersection,
    curve,
    dehn_twist,
    geometric_intersection,
    self_intersection,
)
from .handlebody import HandlebodyError, HandlebodyStructure, find_wave, is_meridian, standard_handlebody
from .polysurface import CoverMap, PolySurface, SurfaceError, genus, standard_surface, validate

__all__ = [
    "CoverError",
    "CoverMap",
    "CurveDiagram",
    "CurveError",
    "FiniteCover",
    "FiniteGroupRep",
    "HandlebodyError",
    "HandlebodyStructure",
    "PolySurface",
    "SurfaceError",
    "algebraic_intersection",
    "build_cover",
    "curve",
    "dehn_twist",
    "elevate",
    "extends_to_handlebody_cover",
    "find_wave",
    "genus",
    "geometric_intersection",
    "hom_from_intersection",
    "is_meridian",
    "lift_degree",
    "self_intersection",
    "standard_handlebody",
    "standard_surface",
    "validate",
]
