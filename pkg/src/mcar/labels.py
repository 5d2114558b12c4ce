"""Core types and operations for ambiguously labeled data.

An ambiguously labeled dataset pairs each feature vector with a candidate
label set that is known to contain the one true label.  Soft labeling
matrices are plain ``(c, N)`` arrays whose columns are probability vectors
supported on the candidate sets; per-instance weights are ``(N,)`` vectors
holding the diagonal of a column-scaling matrix.  Class indices are 0-based
everywhere inside the library.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

# Candidate sets are kept as sorted tuples of 0-based class indices.
Candidates = list[tuple[int, ...]]

WEIGHT_FLOOR = 1e-12


def candidate_set(labels, num_classes: int) -> tuple[int, ...]:
    """Normalize an iterable of class indices into a sorted candidate tuple.

    Raises
    ------
    DataError
        If the set is empty or any index falls outside ``[0, num_classes)``.
    """
    out = tuple(sorted(set(int(i) for i in labels)))
    if not out:
        raise DataError("candidate label set is empty")
    if out[0] < 0 or out[-1] >= num_classes:
        raise DataError(
            f"candidate label {out[0] if out[0] < 0 else out[-1]} outside "
            f"[0, {num_classes})"
        )
    return out


@dataclass(frozen=True)
class AmbiguousDataset:
    """Feature matrix plus per-instance candidate label sets.

    Parameters
    ----------
    features : (m, N) ndarray
        Column ``j`` is the feature vector of instance ``j``.
    candidates : list of tuples
        ``candidates[j]`` holds the 0-based candidate labels of instance ``j``.
    num_classes : int
    ground_truth : (N,) ndarray of int, optional
        Used for evaluation only.  A truth label missing from its candidate
        set is tolerated with a warning (it makes perfect recovery
        impossible but is the caller's data issue).
    """

    features: np.ndarray
    candidates: Candidates = field(repr=False)
    num_classes: int
    ground_truth: np.ndarray | None = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        if feats.ndim != 2:
            raise DataError("features must be a 2-d (m, N) array")
        if not np.all(np.isfinite(feats)):
            raise DataError("features contain non-finite entries")
        object.__setattr__(self, "features", feats)
        if len(self.candidates) != feats.shape[1]:
            raise DataError(
                f"{len(self.candidates)} candidate sets for {feats.shape[1]} instances"
            )
        sets = [candidate_set(s, self.num_classes) for s in self.candidates]
        object.__setattr__(self, "candidates", sets)
        if self.ground_truth is not None:
            truth = np.asarray(self.ground_truth, dtype=int)
            if truth.shape != (feats.shape[1],):
                raise DataError("ground_truth length does not match instances")
            if truth.min(initial=0) < 0 or truth.max(initial=0) >= self.num_classes:
                raise DataError("ground_truth label outside [0, num_classes)")
            object.__setattr__(self, "ground_truth", truth)
            missing = [j for j, s in enumerate(sets) if truth[j] not in s]
            if missing:
                warnings.warn(
                    f"ground-truth label not among candidates for "
                    f"{len(missing)} instance(s), e.g. instance {missing[0]}",
                    stacklevel=2,
                )

    @property
    def num_instances(self) -> int:
        return self.features.shape[1]

    @property
    def feature_dim(self) -> int:
        return self.features.shape[0]


def candidate_mask(candidates: Candidates, num_classes: int) -> np.ndarray:
    """Boolean ``(c, N)`` mask, True where class i is a candidate of instance j."""
    mask = np.zeros((num_classes, len(candidates)), dtype=bool)
    for j, labels in enumerate(candidates):
        mask[list(labels), j] = True
    return mask


def init_soft_labels(candidates: Candidates, num_classes: int) -> np.ndarray:
    """Uniform soft labels: probability 1/|L_j| on each candidate of column j."""
    P = np.zeros((num_classes, len(candidates)))
    for j, labels in enumerate(candidates):
        labels = candidate_set(labels, num_classes)
        P[list(labels), j] = 1.0 / len(labels)
    return P


def validate_soft_labels(
    P: np.ndarray,
    candidates: Candidates | None = None,
    column_sums: np.ndarray | float = 1.0,
    null_class: int | None = None,
    atol: float = 1e-9,
) -> None:
    """Assert non-negativity, column sums, and candidate support of ``P``.

    With ``null_class`` set, the support check skips that row (it is always
    permitted), matching the relaxed masking used under group constraints.
    """
    P = np.asarray(P)
    if np.min(P) < -atol:
        raise DataError("soft label matrix has negative entries")
    sums = P.sum(axis=0)
    if not np.allclose(sums, column_sums, atol=atol, rtol=0):
        raise DataError("soft label columns do not sum to their targets")
    if candidates is not None:
        allowed = candidate_mask(candidates, P.shape[0])
        if null_class is not None:
            allowed[null_class, :] = True
        if np.any(np.abs(P[~allowed]) > atol):
            raise DataError("soft label mass outside the candidate support")


def predict_labels(Y: np.ndarray, candidates: Candidates) -> np.ndarray:
    """Hard labels: per column, the argmax of ``Y`` restricted to candidates.

    Ties break toward the lowest class index.
    """
    Y = np.asarray(Y)
    if Y.shape[1] != len(candidates):
        raise DataError("column count does not match candidate sets")
    allowed = candidate_mask(candidates, Y.shape[0])
    scores = np.where(allowed, Y, -np.inf)
    return np.argmax(scores, axis=0)


def estimated_class_counts(P: np.ndarray) -> np.ndarray:
    """Per-class soft instance counts: row sums of a column-stochastic ``P``."""
    return np.asarray(P, dtype=float).sum(axis=1)


def weight_matrix(P: np.ndarray) -> np.ndarray:
    """Diagonal of the instance-weighting matrix computed from soft labels.

    Entry j is ``1 / sqrt(sum_i p_{i,j} * count_i)`` where ``count_i`` is the
    estimated number of instances of class i.  Instances whose candidate mass
    sits on over-represented classes are scaled down so they contribute less
    to the low-rank approximation.  The denominator is floored to stay
    invertible for near-degenerate inputs.
    """
    P = np.asarray(P, dtype=float)
    counts = estimated_class_counts(P)
    effective = counts @ P
    return 1.0 / np.sqrt(np.maximum(effective, WEIGHT_FLOOR))


def identity_weights(num_instances: int) -> np.ndarray:
    """Unit weights; reduces the weighted solver to the unweighted one."""
    return np.ones(num_instances)


def project_column_to_candidate_simplex(
    v: np.ndarray, mask, target_sum: float
) -> np.ndarray:
    """Project a score vector onto the scaled simplex over a candidate set.

    Entries outside ``mask`` are zeroed, negatives clamped, and the remainder
    rescaled to sum to ``target_sum``.  A column left with no mass falls back
    to uniform over the mask, keeping the iterate feasible instead of
    propagating NaN.
    """
    if target_sum <= 0:
        raise DataError("target_sum must be positive")
    v = np.asarray(v, dtype=float)
    idx = list(mask)
    if not idx:
        raise DataError("candidate mask is empty")
    out = np.zeros_like(v)
    kept = np.maximum(v[idx], 0.0)
    total = kept.sum()
    if total > 0:
        out[idx] = kept * (target_sum / total)
    else:
        out[idx] = target_sum / len(idx)
    return out


def labeling_error_rate(pred, truth) -> float:
    """Fraction of instances whose predicted label differs from the truth."""
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape:
        raise DataError("prediction and truth lengths differ")
    if pred.size == 0:
        raise DataError("cannot score an empty label list")
    return float(np.mean(pred != truth))


def imbalance_factor(candidates: Candidates, num_classes: int) -> float:
    """Max/min ratio of per-class occurrence counts over the candidate sets.

    A class that never occurs yields ``math.inf`` rather than an exception.
    """
    counts = np.zeros(num_classes)
    for labels in candidates:
        counts[list(labels)] += 1
    if counts.min() == 0:
        return math.inf
    return float(counts.max() / counts.min())
