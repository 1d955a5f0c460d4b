"""Exact deciders, recognizers, and search tools for forall/exists
regularity of quantified interval matrices."""

from .classes import (
    ClassCheck,
    ClassWitness,
    ae_h_matrix,
    ae_inverse_nonnegative_sufficient,
    ae_m_matrix,
    is_h_matrix,
    is_inverse_nonnegative,
    is_m_matrix,
    strong_inverse_nonnegative,
    weak_h_matrix,
    weak_m_matrix,
)
from .core import (
    Interval,
    IntervalMatrix,
    QIMatrix,
    Quantifier,
    VertexIndex,
    comparison_matrix,
    magnitude,
    midpoint_radius,
    mignitude,
    random_member,
    sign_vertex_matrix,
    split,
    vertex_matrix,
)
from .engine import (
    ClassicalRegularityResult,
    EngineConfig,
    FalsifierResult,
    RegularityStatus,
    Verdict,
    VerdictStatus,
    check_ae_regular,
    classical_regular,
    falsify_ae_regular,
    verify_witness,
)
from .errors import BudgetExceededError, ShapeMismatchError
from .explorers import ExplorerReport, conjecture1_explorer, conjecture2_explorer
from .intrank import (
    FullRankResult,
    StructuredDecision,
    strongly_full_column_rank,
    structured_ae_regular_columns,
    structured_ae_regular_row,
)
from .linalg import (
    RationalMatrix,
    determinant,
    feasible_positive,
    inverse,
    null_space_vector,
    rank,
)
from .matfile import ParseError, format_qimatrix, parse_qimatrix
from .singularity import (
    RadiusFilter,
    SingularityStatus,
    StrongSingularityResult,
    SubmatrixWitness,
    conjecture1_witness,
    generate_strongly_singular,
    is_strongly_singular,
    radius_filter,
    structured_row_strong_singular,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
