"""Exact rational convex geometry: hulls, half-space systems, volumes."""

from .lp import in_cone, maximize
from .polytope import (
    Halfspace,
    RationalPolytope,
    affine_dim,
    affine_map,
    convex_hull,
    empty_polytope,
    halfspace,
    hausdorff_distance,
    intersect_halfspaces,
    intersection,
    lattice_points,
    lattice_volume,
    project,
    restrict,
    scale,
    signed_decomposition_volume,
    squared_distance,
    translate,
    triangulation,
    volume,
)
from .rational import QuadraticValue, QVector, as_rational, format_rational, qvec

__all__ = [
    "Halfspace", "QuadraticValue", "QVector", "RationalPolytope", "affine_dim",
    "affine_map", "as_rational", "convex_hull", "empty_polytope", "format_rational",
    "halfspace", "hausdorff_distance", "in_cone", "intersect_halfspaces",
    "intersection", "lattice_points", "lattice_volume", "maximize", "project", "qvec",
    "restrict", "scale", "signed_decomposition_volume", "squared_distance",
    "translate", "triangulation", "volume",
]
