"""Solow-Polasky diversity of planar point sets.

Exact and greedy diversity maximization, margin measurement, separation
certificates, and a polynomial-time reduction from unit-disk independent
set to diversity maximization.
"""

from .bounds import (
    BoxRegime,
    GapCertificate,
    bad_upper_bound,
    certify_gap,
    good_lower_bound,
)
from .diversity import (
    SimilarityMatrix,
    Weighting,
    similarity_matrix,
    solow_polasky,
    sp_gradient,
    sp_of_subset,
)
from .estimators import SolowPolaskySelector
from .exceptions import (
    BudgetExceededError,
    PointFormatError,
    SeparationError,
    SingularMatrixError,
)
from .geometry import (
    MarginReport,
    PointSet,
    UnitDiskGraph,
    coordinate_bit_length,
    distance,
    distance_matrix,
    format_points,
    margins,
    parse_points,
    scale,
    squared_distance,
    unit_disk_graph,
)
from .reduction import (
    DecisionReport,
    ReductionInstance,
    ScalePlan,
    VerificationReport,
    decide_via_sp,
    plan_analytic,
    plan_bit_complexity,
    reduce,
    verify_reduction,
)
from .solvers import (
    IndependentSetResult,
    Selection,
    SelectionResult,
    max_independent_set,
    sp_select_exact,
    sp_select_greedy,
)

__version__ = "0.1.0"

__all__ = [
    "BoxRegime",
    "BudgetExceededError",
    "DecisionReport",
    "GapCertificate",
    "IndependentSetResult",
    "MarginReport",
    "PointFormatError",
    "PointSet",
    "ReductionInstance",
    "ScalePlan",
    "Selection",
    "SelectionResult",
    "SeparationError",
    "SimilarityMatrix",
    "SingularMatrixError",
    "SolowPolaskySelector",
    "UnitDiskGraph",
    "VerificationReport",
    "Weighting",
    "bad_upper_bound",
    "certify_gap",
    "coordinate_bit_length",
    "decide_via_sp",
    "distance",
    "distance_matrix",
    "format_points",
    "good_lower_bound",
    "margins",
    "max_independent_set",
    "parse_points",
    "plan_analytic",
    "plan_bit_complexity",
    "reduce",
    "scale",
    "similarity_matrix",
    "solow_polasky",
    "sp_gradient",
    "sp_of_subset",
    "sp_select_exact",
    "sp_select_greedy",
    "squared_distance",
    "unit_disk_graph",
    "verify_reduction",
]
