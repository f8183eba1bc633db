"""Exact combinatorial toolkit for curve-graph distances, annular twisting
and intersection bounds on the four low-complexity surfaces S_1,1, S_0,4,
S_0,5 and S_1,2.

Everything is integer or rational arithmetic; floating point only enters
through base-2 logarithms at the final comparison step, with a fixed
comparison slack.  The package re-verifies, on concrete data, the
inequality suite relating intersection numbers to sums of cut-off
subsurface distances.
"""

from .arrangement import dehn_twist_curve, nintersect
from .bounds import (
    ConstantsTable,
    audit_geodesic_sums,
    compare_growth,
    constants_for,
    floor_two_log2,
    sharp_upper_constant,
    tower_constant,
    truncated_sums,
)
from .core import (
    MIN_SAFE_CUTOFF,
    S04,
    S05,
    S11,
    S12,
    SurfaceSig,
    complexity,
    cutoff,
    euler_characteristic,
    log2_or_zero,
)
from .errors import (
    BudgetExceededError,
    CutoffTooSmallError,
    EmptyProjectionError,
    InvalidParamsError,
    InvalidSubsurfaceError,
    NotApplicableError,
    ToolkitError,
    TriangulationMismatchError,
    UnsupportedSignatureError,
)
from .farey import (
    SPHERE4,
    TORUS,
    FareySurface,
    Slope,
    all_geodesics,
    annular_distance,
    annular_profile,
    build_high_twist_pair,
    dehn_twist,
    farey_surface,
    fintersect,
    graph_distance,
    grid_slopes,
    is_adjacent,
    truncated_sum,
)
from .projections import (
    AnnularSubsurface,
    NonAnnularSubsurface,
    annular_projects,
    curves_in_subsurface,
    project_nonannular,
    subsurface_distance,
    subsurfaces_of,
)
from .regions import boundary_of_filling, fills
from .search import (
    DistanceCertificate,
    SearchConfig,
    TightMultigeodesic,
    distance,
    enumerate_tight_multigeodesics,
    is_tight,
)
from .surfaces import (
    NormalCurve,
    Triangulation,
    enumerate_curves,
    format_curves,
    make_curve,
    parse_curves,
    slope_curve,
    triangulation_for,
)

__version__ = "0.1.0"

__all__ = [
    "MIN_SAFE_CUTOFF",
    "S04",
    "S05",
    "S11",
    "S12",
    "SPHERE4",
    "TORUS",
    "AnnularSubsurface",
    "BudgetExceededError",
    "ConstantsTable",
    "CutoffTooSmallError",
    "DistanceCertificate",
    "EmptyProjectionError",
    "FareySurface",
    "InvalidParamsError",
    "InvalidSubsurfaceError",
    "NonAnnularSubsurface",
    "NormalCurve",
    "NotApplicableError",
    "SearchConfig",
    "Slope",
    "SurfaceSig",
    "TightMultigeodesic",
    "ToolkitError",
    "Triangulation",
    "TriangulationMismatchError",
    "UnsupportedSignatureError",
    "all_geodesics",
    "annular_distance",
    "annular_profile",
    "annular_projects",
    "audit_geodesic_sums",
    "boundary_of_filling",
    "build_high_twist_pair",
    "compare_growth",
    "complexity",
    "constants_for",
    "curves_in_subsurface",
    "cutoff",
    "dehn_twist",
    "dehn_twist_curve",
    "distance",
    "enumerate_curves",
    "enumerate_tight_multigeodesics",
    "euler_characteristic",
    "farey_surface",
    "fills",
    "fintersect",
    "floor_two_log2",
    "format_curves",
    "graph_distance",
    "grid_slopes",
    "is_adjacent",
    "is_tight",
    "log2_or_zero",
    "make_curve",
    "nintersect",
    "parse_curves",
    "project_nonannular",
    "sharp_upper_constant",
    "slope_curve",
    "subsurface_distance",
    "subsurfaces_of",
    "tower_constant",
    "triangulation_for",
    "truncated_sum",
    "truncated_sums",
]
