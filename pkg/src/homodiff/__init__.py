"""Demographic attribute inference on communication graphs.

Pipeline: load an edge list and partial ground-truth ages, diagnose label
homophily against an independence surrogate, spread seed labels through a
memory-anchored diffusion, collapse the resulting probability vectors into
category predictions (optionally quota-constrained), and evaluate hit rates
stratified by seed proximity, degree, and confidence.
"""

from .assignment import (
    Prediction,
    TargetDistribution,
    argmax_assign,
    constrained_assign,
    empirical_distribution,
    largest_remainder,
    read_predictions,
    write_predictions,
)
from .diffusion import (
    DiffusionParams,
    DiffusionResult,
    init_state,
    laplacian_residual,
    neighbor_sums,
    read_state,
    run,
    step,
    write_state,
)
from .evaluation import (
    EvalReport,
    StratumPoint,
    ThresholdPoint,
    distance_to_seeds,
    evaluate,
    hits,
    seeds_in_neighborhood,
    seeds_in_neighborhood_counts,
    stratified_hits,
    threshold_curve,
)
from .graph import (
    EdgeListError,
    EdgeListStats,
    Graph,
    InputError,
    NodeIdMap,
    export_edge_list,
    graph_from_pairs,
    load_edge_list,
)
from .homophily import (
    MixingMatrix,
    communication_matrix,
    social_effect_matrix,
    surrogate_matrix,
)
from .labels import (
    AgeBinning,
    LabelFileError,
    LabelStore,
    Split,
    bin_age,
    load_ages,
    load_ground_truth,
    read_split,
    split_train_validation,
    write_split,
    year_store,
)
from .synth import SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "AgeBinning",
    "DiffusionParams",
    "DiffusionResult",
    "EdgeListError",
    "EdgeListStats",
    "EvalReport",
    "Graph",
    "InputError",
    "LabelFileError",
    "LabelStore",
    "MixingMatrix",
    "NodeIdMap",
    "Prediction",
    "Split",
    "StratumPoint",
    "SynthConfig",
    "TargetDistribution",
    "ThresholdPoint",
    "argmax_assign",
    "bin_age",
    "communication_matrix",
    "constrained_assign",
    "distance_to_seeds",
    "empirical_distribution",
    "evaluate",
    "export_edge_list",
    "generate",
    "graph_from_pairs",
    "hits",
    "init_state",
    "laplacian_residual",
    "largest_remainder",
    "load_ages",
    "load_edge_list",
    "load_ground_truth",
    "neighbor_sums",
    "read_predictions",
    "read_split",
    "read_state",
    "run",
    "seeds_in_neighborhood",
    "seeds_in_neighborhood_counts",
    "social_effect_matrix",
    "split_train_validation",
    "step",
    "stratified_hits",
    "surrogate_matrix",
    "threshold_curve",
    "write_predictions",
    "write_split",
    "write_state",
    "year_store",
]
