"""Exact-arithmetic toolkit for weighted plane curve quadruples.

A quadruple (w0, w1, w2; d) of positive integer weights and a degree
determines the lattice polytope of degree-d monomials in three weighted
variables.  This package validates quadruples, builds their polytopes,
verifies the determinant and counting identities these polytopes
satisfy, projects them to plane lattice polygons, canonicalizes the
polygons under affine unimodular equivalence, and classifies all
quadruples of a fixed genus into finitely many polygon classes.
"""
from .classify import (
    BasisChange,
    ClassAtlas,
    ClassEntry,
    StabilizationReport,
    WeightedCurve,
    basis_change,
    enumerate_classes,
    group_by_class,
    make_curve,
    map_curve,
    stabilization_report,
)
from .errors import (
    DegenerateInputError,
    InvariantViolation,
    PreconditionError,
    WPolyError,
)
from .polygon2d import (
    LatticePolygon,
    UnimodularAffineMap,
    apply_map,
    canonical_form,
    convex_hull,
    counts,
    equivalent,
    polygon_from_json_dict,
    project,
    projection_coordinates,
    random_unimodular_map,
    triangulate,
)
from .quadruples import (
    D_MAX_CAP,
    Quadruple,
    ValidityReport,
    enumerate_g_good,
    family_quadruple,
    genus,
    raw_genus,
    reduce_weights,
    validate,
)
from .render import render_polygon_svg
from .wpolytope import (
    CaseReport,
    DistinguishedTriangle,
    WeightedPolytope,
    build,
    decompose,
    distinguished_triangle,
    find_unimodular_triple,
    interior_count,
    minor_det,
    verify_case_identities,
)

__version__ = "0.1.0"

__all__ = [
    "BasisChange",
    "CaseReport",
    "ClassAtlas",
    "ClassEntry",
    "D_MAX_CAP",
    "DegenerateInputError",
    "DistinguishedTriangle",
    "InvariantViolation",
    "LatticePolygon",
    "PreconditionError",
    "Quadruple",
    "StabilizationReport",
    "UnimodularAffineMap",
    "ValidityReport",
    "WPolyError",
    "WeightedCurve",
    "WeightedPolytope",
    "apply_map",
    "basis_change",
    "build",
    "canonical_form",
    "convex_hull",
    "counts",
    "decompose",
    "distinguished_triangle",
    "enumerate_classes",
    "enumerate_g_good",
    "equivalent",
    "family_quadruple",
    "find_unimodular_triple",
    "genus",
    "group_by_class",
    "interior_count",
    "make_curve",
    "map_curve",
    "minor_det",
    "polygon_from_json_dict",
    "project",
    "projection_coordinates",
    "random_unimodular_map",
    "raw_genus",
    "reduce_weights",
    "render_polygon_svg",
    "stabilization_report",
    "triangulate",
    "validate",
    "verify_case_identities",
]
