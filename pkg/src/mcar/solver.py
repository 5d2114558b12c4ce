"""Augmented-Lagrangian solver recovering soft labels by low-rank completion.

The observed soft labeling matrix P and feature matrix X are stacked into a
single heterogeneous matrix.  The solver splits it into a low-rank part
[Y; Z] and sparse noise [E_P; E_X] by alternating closed-form updates:
elementwise shrinkage for the noise blocks, singular value thresholding for
the low-rank block, a dual ascent step on the multiplier, and a feasibility
projection that pins each column of Y back onto its candidate simplex.
Columns may be rescaled by per-instance weights so that instances tied to
over-represented labels do not dominate the low-rank fit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverDivergenceError
from .labels import (
    AmbiguousDataset,
    Candidates,
    identity_weights,
    init_soft_labels,
    project_column_to_candidate_simplex,
    weight_matrix,
)


def shrink(a: float, B: np.ndarray) -> np.ndarray:
    """Elementwise soft threshold sgn(b) * max(|b| - a, 0)."""
    B = np.asarray(B, dtype=float)
    return np.sign(B) * np.maximum(np.abs(B) - a, 0.0)


def svt(A: np.ndarray, tau: float) -> np.ndarray:
    """Singular value thresholding via economy SVD.

    Raises ``numpy.linalg.LinAlgError`` on non-finite input.
    """
    U, s, Vt = np.linalg.svd(np.asarray(A, dtype=float), full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    keep = s > 0
    if not np.any(keep):
        return np.zeros_like(A, dtype=float)
    return (U[:, keep] * s[keep]) @ Vt[keep]


def default_lambda(num_classes: int, feature_dim: int, num_instances: int) -> float:
    """Sparse-noise tradeoff 1 / sqrt(max(c + m, N))."""
    if min(num_classes, feature_dim, num_instances) < 1:
        raise ValueError("dimensions must be positive")
    return 1.0 / np.sqrt(max(num_classes + feature_dim, num_instances))


@dataclass(frozen=True)
class SolverConfig:
    """Hyperparameters of the alternating solve.

    ``lam``, ``gamma``, ``mu0`` and ``mu_max`` default to data-dependent
    values resolved at solve time: lam = 1/sqrt(max(c+m, N)), gamma = 2*lam
    (stronger sparsity on the labeling block than on feature noise),
    mu0 = 1.25 / ||stacked observation||_2, and mu_max = 1e9 * mu0.  The
    ceiling must stay well above gamma / tol: the label-block shrinkage
    biases entries by gamma/mu per iteration, which floors the reachable
    residual near gamma/mu_max.
    """

    lam: float | None = None
    gamma: float | None = None
    mu0: float | None = None
    rho: float = 1.5
    mu_max: float | None = None
    tol: float = 1e-7
    max_iter: int = 500

    def __post_init__(self):
        for name in ("lam", "gamma", "mu0", "mu_max", "tol"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive")
        if self.rho <= 1:
            raise ValueError("rho must exceed 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if (
            self.mu0 is not None
            and self.mu_max is not None
            and self.mu_max < self.mu0
        ):
            raise ValueError("mu_max must be >= mu0")


@dataclass(frozen=True)
class SolveResult:
    """Recovered factors and diagnostics of one solve.

    ``Y`` is the recovered soft labeling matrix in the unscaled domain
    (columns sum to 1 on the candidate support); ``Z`` the recovered feature
    matrix; ``E_P``/``E_X`` the labeling and feature noise.
    ``final_residual`` is the relative Frobenius mismatch between the
    observation and ``[Y; Z] + [E_P; E_X]`` in the weighted domain.
    """

    Y: np.ndarray
    Z: np.ndarray
    E_P: np.ndarray
    E_X: np.ndarray
    iterations: int
    final_residual: float
    converged: bool
    group_report: "object | None" = None


def _project_columns(Yb, candidates, targets):
    for j, labels in enumerate(candidates):
        Yb[:, j] = project_column_to_candidate_simplex(Yb[:, j], labels, targets[j])
    return Yb


def wmcar_solve(
    dataset: AmbiguousDataset,
    P: np.ndarray | None = None,
    W: np.ndarray | None = None,
    config: SolverConfig | None = None,
    *,
    candidates: Candidates | None = None,
    project=None,
) -> SolveResult:
    """Weighted low-rank ambiguity resolution.

    Parameters
    ----------
    dataset : AmbiguousDataset
    P : (c, N) ndarray, optional
        Initial soft labels; defaults to uniform over the candidate sets.
    W : (N,) ndarray, optional
        Diagonal of the column-weighting matrix; defaults to the
        imbalance-compensating weights computed from ``P``.
    config : SolverConfig, optional
    candidates : list of tuples, optional
        Overrides ``dataset.candidates`` (used by the elimination loop,
        whose working sets shrink below the dataset's).
    project : callable, optional
        Replaces the per-column feasibility projection.  Called as
        ``project(Yb, candidates, weights)`` on the weighted-domain label
        block, returning the projected block.

    Raises
    ------
    SolverDivergenceError
        If an iterate turns non-finite; carries the failing iteration.
    """
    config = config or SolverConfig()
    cands = dataset.candidates if candidates is None else candidates
    c = dataset.num_classes
    X = dataset.features
    m, N = X.shape
    if P is None:
        P = init_soft_labels(cands, c)
    P = np.asarray(P, dtype=float)
    if W is None:
        W = weight_matrix(P)
    w = np.asarray(W, dtype=float).reshape(-1)
    if w.shape != (N,) or np.any(w <= 0) or not np.all(np.isfinite(w)):
        raise ValueError("weights must be N positive finite values")

    Pb = P * w
    Xb = X * w
    Hobs = np.vstack([Pb, Xb])
    hobs_fro = np.linalg.norm(Hobs)
    spectral = np.linalg.norm(Hobs, 2)

    lam = config.lam if config.lam is not None else default_lambda(c, m, N)
    gamma = config.gamma if config.gamma is not None else 2.0 * lam
    mu = config.mu0 if config.mu0 is not None else 1.25 / spectral
    mu_max = config.mu_max if config.mu_max is not None else 1e9 * mu

    Lmb = Hobs / spectral
    Yb = np.zeros((c, N))
    Zb = np.zeros((m, N))

    residual = np.inf
    converged = False
    iterations = 0
    for it in range(1, config.max_iter + 1):
        iterations = it
        EP = Pb - shrink(gamma / mu, Yb - Lmb[:c] / mu)
        EX = shrink(lam / mu, Xb - Zb + Lmb[c:] / mu)
        E = np.vstack([EP, EX])
        try:
            Hb = svt(Hobs - E + Lmb / mu, 1.0 / mu)
        except np.linalg.LinAlgError as exc:
            raise SolverDivergenceError(str(exc), iteration=it) from None

        Yb = Hb[:c].copy()
        Zb = Hb[c:]
        if project is not None:
            Yb = project(Yb, cands, w)
        else:
            Yb = _project_columns(Yb, cands, w)
        Hb = np.vstack([Yb, Zb])

        # Dual ascent on the feasible (projected) iterate.  Feeding the raw
        # thresholding output to the multiplier lets it accumulate the
        # projection gap and can lock the labels into a bad corner.
        Lmb = Lmb + mu * (Hobs - Hb - E)
        mu = min(config.rho * mu, mu_max)

        residual = float(np.linalg.norm(Hobs - Hb - E) / hobs_fro)
        if not np.isfinite(residual):
            raise SolverDivergenceError("residual is non-finite", iteration=it)
        if residual < config.tol:
            converged = True
            break

    H = Hb / w
    E_P = EP / w
    E_X = EX / w
    return SolveResult(
        Y=H[:c],
        Z=H[c:],
        E_P=E_P,
        E_X=E_X,
        iterations=iterations,
        final_residual=residual,
        converged=converged,
    )


def mcar_solve(
    dataset: AmbiguousDataset,
    P: np.ndarray | None = None,
    config: SolverConfig | None = None,
    *,
    candidates: Candidates | None = None,
) -> SolveResult:
    """Unweighted ambiguity resolution (unit column weights)."""
    return wmcar_solve(
        dataset,
        P=P,
        W=identity_weights(dataset.num_instances),
        config=config,
        candidates=candidates,
    )
