"""Pfaffian varieties C(n, 2r): skew matrices of rank at most 2r.

Numerical tools for the geometry behind their area-minimization:
canonical forms and Pfaffians, projection onto the cone, weighting functions
of the slicing construction, the shape operator at regular points, tangent
cones at singular points, and seeded verification suites.
"""
from .errors import (
    DegenerateFitError,
    DegenerateLevelError,
    FocalRadiusError,
    OffVarietyError,
    StepTooLargeError,
    UnsupportedRegimeError,
)
from .skew import (
    CanonicalForm,
    SkewSVD,
    as_skew,
    basis,
    block_form,
    canonical_decompose,
    pfaffian_expand,
    pfaffian_fast,
    principal_pfaffian,
    random_skew,
    random_special_orthogonal,
    read_matrix,
    skew_inner,
    skew_norm,
    skew_svd,
    write_matrix,
)
from .variety import (
    Projection,
    VarietySpec,
    codimension,
    contains_pfaffian,
    contains_rank,
    dimension,
    distance,
    project,
    stratum,
)
from .geometry import (
    ShapeOperator,
    WedgePoint,
    lemma47_check,
    orientability_action,
    second_fundamental,
    shape_operator,
    wedge_determinant,
    weight_primary,
    weight_primary_numeric,
    weight_primary_wedge,
)
from .slicing import (
    SecondaryLevel,
    SliceChart,
    composite_inequality,
    composite_min_check,
    same_slicing_set,
    secondary_level,
    secondary_point,
    slice_decompose,
    weight_secondary,
)
from .tangent import (
    TangentQuery,
    approach_curve,
    factorize_tangent_cone,
    nearly_regular_flag,
    order_fit,
    tangent_membership,
    weyl_bounds_check,
)
from .suites import VerificationReport, emit_sweep, run_suite

__all__ = [
    "DegenerateFitError",
    "DegenerateLevelError",
    "FocalRadiusError",
    "OffVarietyError",
    "StepTooLargeError",
    "UnsupportedRegimeError",
    "CanonicalForm",
    "SkewSVD",
    "as_skew",
    "basis",
    "block_form",
    "canonical_decompose",
    "pfaffian_expand",
    "pfaffian_fast",
    "principal_pfaffian",
    "random_skew",
    "random_special_orthogonal",
    "read_matrix",
    "skew_inner",
    "skew_norm",
    "skew_svd",
    "write_matrix",
    "Projection",
    "VarietySpec",
    "codimension",
    "contains_pfaffian",
    "contains_rank",
    "dimension",
    "distance",
    "project",
    "stratum",
    "ShapeOperator",
    "WedgePoint",
    "lemma47_check",
    "orientability_action",
    "second_fundamental",
    "shape_operator",
    "wedge_determinant",
    "weight_primary",
    "weight_primary_numeric",
    "weight_primary_wedge",
    "SecondaryLevel",
    "SliceChart",
    "composite_inequality",
    "composite_min_check",
    "same_slicing_set",
    "secondary_level",
    "secondary_point",
    "slice_decompose",
    "weight_secondary",
    "TangentQuery",
    "approach_curve",
    "factorize_tangent_cone",
    "nearly_regular_flag",
    "order_fit",
    "tangent_membership",
    "weyl_bounds_check",
    "VerificationReport",
    "emit_sweep",
    "run_suite",
]

__version__ = "0.1.0"
