"""Exact computation with continuous nondecreasing surjections of b^w."""

from .experiments import (
    ColoringSpec,
    EpsilonParameters,
    ExperimentReport,
    OscillationReport,
    PerfectTreeReport,
    QCopy,
    WitnessOutcome,
    build_witness,
    epsilon_parameters,
    find_cell_within,
    lower_bound_coloring,
    omega_coloring,
    oscillation_search,
    perfect_tree,
    random_qcopy,
    realize_all_colors,
)
from .intervals import (
    ClopenInterval,
    DepthPartition,
    Filtering,
    FilteringReport,
    is_refinement,
    refine_canonical,
    refinement_report,
    validate_filtering,
)
from .points import Dyadic, Node, Point, lex_compare, max_point, min_point, rho
from .randgen import (
    derive_rng,
    increasing_q_points,
    random_filtering,
    random_q_point_between,
    random_surjection,
)
from .similarity import (
    TreeType,
    canonical_coloring,
    enumerate_types,
    is_strongly_diagonal,
    meet_closure,
    scan_types,
    search_tuple_of_type,
    similarity_type,
    tangent_number,
    tangent_table,
)
from .surjections import (
    BoundaryTuple,
    ChainSurjection,
    DistanceResult,
    Evaluation,
    FactorizationError,
    FilteringSurjection,
    Surjection,
    compose,
    distance,
    factor_through,
    from_filtering,
    identity,
    surjection_from_json,
    to_filtering,
    truncate,
    tuple_to_factor,
    tuple_to_surjection,
)
from .verify import replay, run_suite

__all__ = [
    "Point",
    "Node",
    "Dyadic",
    "lex_compare",
    "rho",
    "min_point",
    "max_point",
    "ClopenInterval",
    "DepthPartition",
    "Filtering",
    "FilteringReport",
    "validate_filtering",
    "refine_canonical",
    "refinement_report",
    "is_refinement",
    "Surjection",
    "FilteringSurjection",
    "ChainSurjection",
    "BoundaryTuple",
    "Evaluation",
    "DistanceResult",
    "FactorizationError",
    "identity",
    "from_filtering",
    "to_filtering",
    "truncate",
    "compose",
    "distance",
    "factor_through",
    "tuple_to_surjection",
    "tuple_to_factor",
    "surjection_from_json",
    "TreeType",
    "tangent_number",
    "tangent_table",
    "enumerate_types",
    "meet_closure",
    "is_strongly_diagonal",
    "similarity_type",
    "canonical_coloring",
    "scan_types",
    "search_tuple_of_type",
    "EpsilonParameters",
    "epsilon_parameters",
    "lower_bound_coloring",
    "realize_all_colors",
    "ExperimentReport",
    "QCopy",
    "find_cell_within",
    "perfect_tree",
    "PerfectTreeReport",
    "omega_coloring",
    "build_witness",
    "WitnessOutcome",
    "ColoringSpec",
    "OscillationReport",
    "oscillation_search",
    "random_qcopy",
    "derive_rng",
    "random_q_point_between",
    "increasing_q_points",
    "random_filtering",
    "random_surjection",
    "run_suite",
    "replay",
]
