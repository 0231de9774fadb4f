"""Exact, finite-scale computations with twisted topological graph algebras.

Finite graphs and partial self-maps give boundary path spaces, shift
groupoids, circle twists glued from cover cocycles, twisted correspondences
and twisted convolution algebras.  Each layer ships verifiers that return a
:class:`~twistgraph.reports.Report`.
"""

from __future__ import annotations

from .algebra import (
    ArrowAlgebra,
    BisectionAlgebra,
    MatrixModel,
    boundary_arrow_algebra,
    check_coboundary_invariance,
    check_covariance,
    check_grading,
    check_grading_pair,
    check_toeplitz,
    matrix_model,
    verify_main_isomorphism,
)
from .boundary import BoundaryPath, boundary_path_set, is_boundary, is_yeend_boundary, periodic, shift
from .correspondence import CorrespondenceElement, check_three_pictures, delta, inner_product
from .errors import (
    BoundExceeded,
    ChartMismatch,
    CyclicGraph,
    InvalidCocycle,
    NonComposable,
    NotRegular,
    ParseError,
    TwistGraphError,
)
from .factor import FactorMap, boundary_factor_map, compose_factor_maps, induced_hom, is_regular, validate_factor_map
from .graph import Path, TopGraph, classify_vertices, enumerate_paths
from .groupoid import (
    Bisection,
    BoundaryShift,
    PartialSystem,
    boundary_groupoid_elements,
    check_groupoid_axioms,
    hat_graph,
    shift_system,
    system_elements,
)
from .reports import CheckResult, Report
from .scalars import Cyclotomic, Phase
from .twist import (
    CoverCocycle,
    TwistContext,
    apply_coboundary,
    build_twist,
    constant_cocycle,
    pullback,
    trivial_cocycle,
    validate_cocycle,
    verify_twist_axioms,
)

__version__ = "0.1.0"
