"""Degree tables for secure distributed matrix multiplication.

Core objects: DegreeTable (the exponent pair with its validity conditions),
the GASP_r construction family with closed-form server counts, equivalence
and canonical forms, lower/upper bounds, exhaustive and greedy searches,
ILP model export, and a working protocol simulation over prime fields.
"""

from .degree_table import (
    DegreeTable,
    DomainError,
    InvalidTableError,
    ScoreBreakdown,
    ValidationReport,
    count_distinct,
    score_bruteforce,
    sumset,
    validate,
)
from .gasp import (
    GaspParams,
    candidate_set,
    construct,
    h_function,
    n_of_r,
    n_theorem1,
    optimal_r,
    reduction_statistic,
    score_closed_form,
)
from .equivalence import (
    EquivalenceTransform,
    apply_transform,
    canonical,
    is_normal,
    negate,
    normal,
    squeeze,
    transpose,
)
from .bounds import (
    BoundsReport,
    MatrixDims,
    entry_upper_bounds,
    full_report,
    largeT_entry_bound,
    lower_bounds,
    operational_threshold,
)
from .search import (
    GreedyResult,
    SearchResult,
    exhaustive,
    exhaustive_fixed_prefix,
    fixed_prefix_table,
    greedy,
)
from .ilp import (
    IlpModel,
    build_blp,
    build_ilp_fixed,
    emit_lp_text,
    naive_solve,
    parse_lp_text,
)
from .field import PrimeField, is_prime, next_prime
from .sdmm import (
    DecodeResult,
    SdmmInstance,
    SecurityReport,
    build_instance,
    choose_field_and_points,
    decode,
    encode,
    partition,
    plain_product,
    security_check,
    server_compute,
)
from .costmodel import CostExponents, CostReport, asymptotic_compare, concrete_costs

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "CostExponents",
    "CostReport",
    "DecodeResult",
    "DegreeTable",
    "DomainError",
    "EquivalenceTransform",
    "GaspParams",
    "GreedyResult",
    "IlpModel",
    "InvalidTableError",
    "MatrixDims",
    "PrimeField",
    "ScoreBreakdown",
    "SdmmInstance",
    "SearchResult",
    "SecurityReport",
    "ValidationReport",
    "apply_transform",
    "asymptotic_compare",
    "build_blp",
    "build_ilp_fixed",
    "build_instance",
    "candidate_set",
    "canonical",
    "choose_field_and_points",
    "concrete_costs",
    "construct",
    "count_distinct",
    "decode",
    "emit_lp_text",
    "encode",
    "entry_upper_bounds",
    "exhaustive",
    "exhaustive_fixed_prefix",
    "fixed_prefix_table",
    "full_report",
    "greedy",
    "h_function",
    "is_normal",
    "is_prime",
    "largeT_entry_bound",
    "lower_bounds",
    "n_of_r",
    "n_theorem1",
    "naive_solve",
    "negate",
    "next_prime",
    "normal",
    "operational_threshold",
    "optimal_r",
    "parse_lp_text",
    "partition",
    "plain_product",
    "reduction_statistic",
    "score_bruteforce",
    "score_closed_form",
    "security_check",
    "server_compute",
    "squeeze",
    "sumset",
    "transpose",
    "validate",
]
