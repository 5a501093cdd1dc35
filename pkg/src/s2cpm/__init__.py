"""Exact det^{S^2}, S^2-rank and conditional probability table tools."""

from .completion import (
    Completion,
    IncompatibleTables,
    MergeReport,
    PartialFamily,
    RefinementMap,
    complete_table,
    merge_many,
    merge_tables,
)
from .exterior_det import (
    NonSquare,
    Vec2,
    companion_matrix,
    det_exact,
    det_s2,
    det_s2_companion,
    nullspace_exact,
    rank_exact,
    rational,
)
from .probmodel import (
    JointDistribution,
    ForwardReport,
    ZeroPairMass,
    conditional_matrix,
    distribution_vectors,
    joint_rank,
    verify_theorem2,
    weights,
)
from .reconstruct import (
    CocycleViolation,
    Inconsistent,
    IntervalModel,
    NoPositiveRay,
    NotStochastic,
    PopulationTable,
    Segment,
    TripleCoefficients,
    TripleStatus,
    Underdetermined,
    build_interval_model,
    check_pair_witness,
    check_stochastic,
    minimal_population,
    reconstruct_points,
    solve_weights,
    triple_coefficients,
)
from .s2rank import (
    MinorSelector,
    OutOfBounds,
    PairFamily,
    RankViolation,
    S2Error,
    TooSmall,
    ZeroFamily,
    canonical_pairs,
    extract_minor,
    has_s2_rank_one,
    s2_rank_is_one,
    triple_rank_bound,
)

__version__ = "0.1.0"
