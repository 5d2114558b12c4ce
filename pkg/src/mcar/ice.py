"""Iterative candidate elimination around the weighted solver.

Each outer iteration re-solves with weights recomputed from the current soft
labels, then deletes the least likely candidate label from the least
confident portion of the still-ambiguous instances.  Eliminations are
irreversible; the loop stops once every candidate set is a singleton or the
outer-iteration budget runs out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DataError
from .labels import (
    AmbiguousDataset,
    Candidates,
    identity_weights,
    init_soft_labels,
    labeling_error_rate,
    predict_labels,
    project_column_to_candidate_simplex,
    weight_matrix,
)
from .solver import SolveResult, SolverConfig, wmcar_solve


@dataclass(frozen=True)
class IceConfig:
    """Elimination schedule: per-iteration portion and outer budget."""

    elimination_factor: float = 0.5
    max_outer: int = 5
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if not 0 <= self.elimination_factor <= 1:
            raise DataError("elimination_factor must lie in [0, 1]")
        if self.max_outer < 0:
            raise DataError("max_outer must be >= 0")


@dataclass(frozen=True)
class IceIterationRecord:
    """What one outer iteration did, for curve plotting and audits."""

    iteration: int
    num_ambiguous: int  # |A| before elimination
    eliminated: tuple[tuple[int, int], ...]  # (instance, removed label)
    candidate_sizes: tuple[int, ...]  # after elimination
    error_rate: float | None
    solver_iterations: int
    solver_residual: float
    solver_converged: bool


@dataclass(frozen=True)
class IceTrace:
    records: tuple[IceIterationRecord, ...]
    final_candidates: Candidates


def least_likely_candidate(
    Y: np.ndarray, candidate_labels, j: int
) -> tuple[int, float]:
    """Candidate of instance j with the smallest soft score, with that score.

    Ties break toward the lowest class index.
    """
    labels = sorted(candidate_labels)
    scores = Y[labels, j]
    pick = int(np.argmin(scores))
    return labels[pick], float(scores[pick])


def select_elimination_set(scores, ambiguous, f_e: float) -> list[int]:
    """Indices of the ceil(f_e * |A|) lowest-scoring ambiguous instances.

    ``scores`` holds (instance, score) pairs covering ``ambiguous``.  Score
    ties at the cutoff break toward the lower instance index.
    """
    ambiguous = set(ambiguous)
    pool = sorted((s, j) for j, s in scores if j in ambiguous)
    count = math.ceil(f_e * len(ambiguous))
    return sorted(j for _, j in pool[:count])


def _comply(Y: np.ndarray, candidates: Candidates) -> np.ndarray:
    """Zero entries outside the candidate sets and renormalize each column."""
    out = Y.copy()
    for j, labels in enumerate(candidates):
        out[:, j] = project_column_to_candidate_simplex(out[:, j], labels, 1.0)
    return out


def _identity_result(dataset: AmbiguousDataset, P: np.ndarray) -> SolveResult:
    return SolveResult(
        Y=P.copy(),
        Z=dataset.features.copy(),
        E_P=np.zeros_like(P),
        E_X=np.zeros_like(dataset.features),
        iterations=0,
        final_residual=0.0,
        converged=True,
    )


def _ice(
    dataset: AmbiguousDataset, config: IceConfig, weighted: bool
) -> tuple[SolveResult, IceTrace]:
    candidates = [tuple(s) for s in dataset.candidates]
    P = init_soft_labels(candidates, dataset.num_classes)
    records = []
    result = None

    for outer in range(1, config.max_outer + 1):
        ambiguous = [j for j, s in enumerate(candidates) if len(s) > 1]
        if not ambiguous:
            break
        W = weight_matrix(P) if weighted else identity_weights(dataset.num_instances)
        result = wmcar_solve(
            dataset, P=P, W=W, config=config.solver, candidates=candidates
        )
        Y = result.Y

        least = {j: least_likely_candidate(Y, candidates[j], j) for j in ambiguous}
        scores = [(j, least[j][1]) for j in ambiguous]
        chosen = select_elimination_set(scores, ambiguous, config.elimination_factor)
        eliminated = tuple((j, least[j][0]) for j in chosen)
        for j, label in eliminated:
            candidates[j] = tuple(i for i in candidates[j] if i != label)

        Y = _comply(Y, candidates)
        P = Y

        error = None
        if dataset.ground_truth is not None:
            error = labeling_error_rate(
                predict_labels(Y, candidates), dataset.ground_truth
            )
        records.append(
            IceIterationRecord(
                iteration=outer,
                num_ambiguous=len(ambiguous),
                eliminated=eliminated,
                candidate_sizes=tuple(len(s) for s in candidates),
                error_rate=error,
                solver_iterations=result.iterations,
                solver_residual=result.final_residual,
                solver_converged=result.converged,
            )
        )

    if result is None:
        result = _identity_result(dataset, P)
    else:
        result = replace(result, Y=P)
    return result, IceTrace(records=tuple(records), final_candidates=candidates)


def wmcar_ice(
    dataset: AmbiguousDataset, config: IceConfig | None = None
) -> tuple[SolveResult, IceTrace]:
    """Weighted solve with iterative candidate elimination.

    Returns the last solve's result with ``Y`` re-projected onto the final
    candidate sets, plus the per-iteration trace.  Predictions should use
    ``trace.final_candidates``, which the eliminations shrank.
    """
    return _ice(dataset, config or IceConfig(), weighted=True)


def mcar_ice(
    dataset: AmbiguousDataset, config: IceConfig | None = None
) -> tuple[SolveResult, IceTrace]:
    """Elimination loop around the unweighted solver (unit weights throughout)."""
    return _ice(dataset, config or IceConfig(), weighted=False)
