"""Ambiguity resolution for candidate-labeled data via low-rank completion.

The package recovers one true label per instance from candidate label sets
by completing a low-rank matrix formed by stacking a soft labeling matrix on
top of the feature matrix.  Variants: unweighted (``mcar_solve``),
imbalance-weighted (``wmcar_solve``), iterative candidate elimination
(``mcar_ice`` / ``wmcar_ice``), and group-constrained solves with a null
class (``group_mcar_solve`` / ``group_wmcar_solve``).
"""

from .errors import DataError, GenerationError, SolverDivergenceError
from .groups import (
    GroupReport,
    GroupStructure,
    extended_candidates,
    group_mcar_solve,
    group_wmcar_solve,
    project_group_constraints,
)
from .ice import (
    IceConfig,
    IceIterationRecord,
    IceTrace,
    least_likely_candidate,
    mcar_ice,
    select_elimination_set,
    wmcar_ice,
)
from .labels import (
    AmbiguousDataset,
    candidate_set,
    estimated_class_counts,
    identity_weights,
    imbalance_factor,
    init_soft_labels,
    labeling_error_rate,
    predict_labels,
    project_column_to_candidate_simplex,
    validate_soft_labels,
    weight_matrix,
)
from .solver import (
    SolveResult,
    SolverConfig,
    default_lambda,
    mcar_solve,
    shrink,
    svt,
    wmcar_solve,
)
from .synth import (
    AmbiguityParams,
    ConvexHullSpec,
    SynthResult,
    gen_convex_hull_data,
    rank_check,
    synthesize_ambiguity,
    synthesize_dataset,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguityParams",
    "AmbiguousDataset",
    "ConvexHullSpec",
    "DataError",
    "GenerationError",
    "GroupReport",
    "GroupStructure",
    "IceConfig",
    "IceIterationRecord",
    "IceTrace",
    "SolveResult",
    "SolverConfig",
    "SolverDivergenceError",
    "SynthResult",
    "candidate_set",
    "default_lambda",
    "estimated_class_counts",
    "extended_candidates",
    "gen_convex_hull_data",
    "group_mcar_solve",
    "group_wmcar_solve",
    "identity_weights",
    "imbalance_factor",
    "init_soft_labels",
    "labeling_error_rate",
    "least_likely_candidate",
    "mcar_ice",
    "mcar_solve",
    "predict_labels",
    "project_column_to_candidate_simplex",
    "project_group_constraints",
    "rank_check",
    "select_elimination_set",
    "shrink",
    "svt",
    "synthesize_ambiguity",
    "synthesize_dataset",
    "validate_soft_labels",
    "weight_matrix",
    "wmcar_ice",
    "wmcar_solve",
]
