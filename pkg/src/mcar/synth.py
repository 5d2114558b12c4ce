"""Synthetic generation of class-structured low-rank data and ambiguous labels.

Each class is modeled as the convex hull of a small set of vertices; samples
are random convex combinations of their class's vertices, so the stacked
one-hot-label + feature matrix has rank at most the total number of
vertices.  Candidate label sets are synthesized on top of the ground truth
with a controlled fraction of ambiguous instances, a fixed number of extra
labels per ambiguous instance, and a co-occurrence degree that biases the
first extra label toward a per-class distractor.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError, GenerationError
from .labels import AmbiguousDataset, Candidates

MAX_PLACEMENT_ATTEMPTS = 100


def _per_class(value, num_classes: int, name: str) -> list[int]:
    if np.isscalar(value):
        return [int(value)] * num_classes
    out = [int(v) for v in value]
    if len(out) != num_classes:
        raise DataError(f"{name} must have one entry per class")
    return out


@dataclass(frozen=True)
class ConvexHullSpec:
    """Geometry and noise of a synthetic class-structured dataset.

    ``vertices_per_class`` and ``samples_per_class`` accept either a scalar
    (broadcast to all classes) or one value per class.  ``vertex_separation``
    sets the scale of the class layout and the minimum distance allowed
    between class centroids.  ``noise_level`` is the std of dense Gaussian
    noise; ``sparse_fraction`` of all feature entries additionally receive a
    corruption of magnitude ``sparse_magnitude`` with random sign.
    """

    num_classes: int
    vertices_per_class: int | tuple[int, ...] = 2
    ambient_dim: int = 20
    samples_per_class: int | tuple[int, ...] = 10
    vertex_separation: float = 4.0
    noise_level: float = 0.0
    sparse_fraction: float = 0.0
    sparse_magnitude: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.num_classes < 1:
            raise DataError("num_classes must be >= 1")
        n_k = _per_class(self.vertices_per_class, self.num_classes, "vertices_per_class")
        s_k = _per_class(self.samples_per_class, self.num_classes, "samples_per_class")
        if min(n_k) < 1 or min(s_k) < 1:
            raise DataError("vertex and sample counts must be >= 1")
        if self.vertex_separation <= 0:
            raise DataError("vertex_separation must be positive")
        if self.noise_level < 0:
            raise DataError("noise_level must be >= 0")
        if not 0 <= self.sparse_fraction < 1:
            raise DataError("sparse_fraction must lie in [0, 1)")
        object.__setattr__(self, "vertices_per_class", tuple(n_k))
        object.__setattr__(self, "samples_per_class", tuple(s_k))
        if sum(n_k) > self.ambient_dim:
            warnings.warn(
                f"total vertex count {sum(n_k)} exceeds ambient dimension "
                f"{self.ambient_dim}; class hulls may not be separable",
                stacklevel=2,
            )


@dataclass(frozen=True)
class SynthResult:
    """Generated data plus the exact factors behind it.

    ``clean_features = vertices @ hull_coefficients`` holds exactly, and
    ``vertex_classes @ hull_coefficients`` is the one-hot ground-truth
    labeling matrix.
    """

    features: np.ndarray  # (m, N), with noise and corruption applied
    clean_features: np.ndarray  # (m, N), noiseless
    ground_truth: np.ndarray  # (N,)
    vertices: np.ndarray  # (m, total_vertices)
    hull_coefficients: np.ndarray  # (total_vertices, N)
    vertex_classes: np.ndarray  # (c, total_vertices), one-hot per vertex

    @property
    def one_hot_labels(self) -> np.ndarray:
        return self.vertex_classes @ self.hull_coefficients


@dataclass(frozen=True)
class AmbiguityParams:
    """Controls for synthesizing candidate label sets from ground truth.

    ``fraction`` of the instances receive ``extra_count`` distinct extra
    labels.  With probability ``epsilon`` the first extra label is the
    designated distractor of the true class ((l+1) mod c, fixed so that
    epsilon is interpretable as a co-occurrence probability); remaining
    extras are drawn uniformly without replacement.
    """

    fraction: float = 1.0
    extra_count: int = 1
    epsilon: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.fraction <= 1:
            raise DataError("fraction must lie in [0, 1]")
        if self.extra_count < 0:
            raise DataError("extra_count must be >= 0")
        if not 0 < self.epsilon <= 1:
            raise DataError("epsilon must lie in (0, 1]")


def _place_centers(rng, spec: ConvexHullSpec) -> np.ndarray:
    """Draw class centers with pairwise separation >= vertex_separation."""
    c, m, sep = spec.num_classes, spec.ambient_dim, spec.vertex_separation
    for _ in range(MAX_PLACEMENT_ATTEMPTS):
        centers = rng.normal(scale=sep, size=(m, c))
        if c == 1:
            return centers
        diffs = centers[:, :, None] - centers[:, None, :]
        dists = np.sqrt((diffs**2).sum(axis=0))
        dists[np.diag_indices(c)] = np.inf
        if dists.min() >= sep:
            return centers
    raise GenerationError(
        f"could not place {c} class centers at separation {sep} in "
        f"dimension {m} within {MAX_PLACEMENT_ATTEMPTS} attempts"
    )


def gen_convex_hull_data(spec: ConvexHullSpec) -> SynthResult:
    """Sample class hulls and per-class convex combinations of their vertices.

    Vertices of a class scatter around its center at a quarter of the
    separation scale; hull coefficients are uniform over the simplex
    (Dirichlet with unit concentration).  Deterministic per ``spec.seed``.
    """
    rng = np.random.default_rng(spec.seed)
    c = spec.num_classes
    n_k = spec.vertices_per_class
    s_k = spec.samples_per_class
    m = spec.ambient_dim
    total_vertices = sum(n_k)
    N = sum(s_k)

    centers = _place_centers(rng, spec)
    spread = spec.vertex_separation / 4.0
    vertices = np.repeat(centers, n_k, axis=1) + rng.normal(
        scale=spread, size=(m, total_vertices)
    )

    T = np.zeros((c, total_vertices))
    offsets = np.concatenate([[0], np.cumsum(n_k)])
    for k in range(c):
        T[k, offsets[k] : offsets[k + 1]] = 1.0

    Q = np.zeros((total_vertices, N))
    truth = np.zeros(N, dtype=int)
    col = 0
    for k in range(c):
        coeffs = rng.dirichlet(np.ones(n_k[k]), size=s_k[k]).T  # (n_k, s_k)
        Q[offsets[k] : offsets[k + 1], col : col + s_k[k]] = coeffs
        truth[col : col + s_k[k]] = k
        col += s_k[k]

    X0 = vertices @ Q
    X = X0.copy()
    if spec.noise_level > 0:
        X += rng.normal(scale=spec.noise_level, size=X.shape)
    if spec.sparse_fraction > 0:
        n_corrupt = int(round(spec.sparse_fraction * X.size))
        if n_corrupt > 0:
            flat = rng.choice(X.size, size=n_corrupt, replace=False)
            signs = rng.choice([-1.0, 1.0], size=n_corrupt)
            X.flat[flat] += signs * spec.sparse_magnitude

    return SynthResult(
        features=X,
        clean_features=X0,
        ground_truth=truth,
        vertices=vertices,
        hull_coefficients=Q,
        vertex_classes=T,
    )


def synthesize_ambiguity(
    truth, num_classes: int, params: AmbiguityParams
) -> Candidates:
    """Build candidate label sets around the true labels.

    A uniformly random ``ceil(fraction * N)`` subset of instances becomes
    ambiguous; each gets ``extra_count`` distinct extra labels chosen per the
    distractor scheme described on :class:`AmbiguityParams`.  The true label
    is always kept.
    """
    truth = np.asarray(truth, dtype=int)
    c = num_classes
    if params.extra_count > c - 1:
        raise DataError(
            f"extra_count {params.extra_count} exceeds the {c - 1} available "
            "extra labels"
        )
    rng = np.random.default_rng(params.seed)
    N = truth.size
    n_ambiguous = math.ceil(params.fraction * N)
    ambiguous = set(rng.choice(N, size=n_ambiguous, replace=False).tolist())

    candidates: Candidates = []
    for j in range(N):
        label = int(truth[j])
        if j not in ambiguous or params.extra_count == 0:
            candidates.append((label,))
            continue
        chosen = [label]
        if rng.random() < params.epsilon:
            chosen.append((label + 1) % c)
        pool = [i for i in range(c) if i not in chosen]
        need = 1 + params.extra_count - len(chosen)
        if need > 0:
            chosen.extend(rng.choice(pool, size=need, replace=False).tolist())
        candidates.append(tuple(sorted(chosen)))
    return candidates


def rank_check(P0: np.ndarray, X0: np.ndarray, tol: float = 1e-8) -> int:
    """Numerical rank of the stacked label+feature matrix.

    Counts singular values above ``tol`` times the largest one.
    """
    H = np.vstack([np.asarray(P0, float), np.asarray(X0, float)])
    svals = np.linalg.svd(H, compute_uv=False)
    if svals.size == 0 or svals[0] == 0:
        return 0
    return int(np.count_nonzero(svals > tol * svals[0]))


def synthesize_dataset(
    spec: ConvexHullSpec, params: AmbiguityParams
) -> tuple[AmbiguousDataset, SynthResult]:
    """Generate features and candidate sets in one call."""
    result = gen_convex_hull_data(spec)
    candidates = synthesize_ambiguity(result.ground_truth, spec.num_classes, params)
    dataset = AmbiguousDataset(
        features=result.features,
        candidates=candidates,
        num_classes=spec.num_classes,
        ground_truth=result.ground_truth,
    )
    return dataset, result
