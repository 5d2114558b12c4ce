"""Shared scenario builders for the unit and acceptance tests."""

from __future__ import annotations

import numpy as np

import mcar


def separable_dataset(seed, num_classes=3, vertices=2, dim=20, per_class=10,
                      fraction=0.9, extra=1, epsilon=None):
    """Noiseless clustered dataset with synthesized candidate sets."""
    if epsilon is None:
        epsilon = 1.0 / (num_classes - 1)
    spec = mcar.ConvexHullSpec(
        num_classes=num_classes,
        vertices_per_class=vertices,
        ambient_dim=dim,
        samples_per_class=per_class,
        seed=seed,
    )
    params = mcar.AmbiguityParams(
        fraction=fraction, extra_count=extra, epsilon=epsilon, seed=seed
    )
    return mcar.synthesize_dataset(spec, params)


def majority_extra_dataset(seed, num_classes=4, vertices=2, dim=30, per_class=15,
                           separation=2.5, majority=0, prob_majority=0.9):
    """Labeling-imbalance scenario: one class rides along in most candidate sets.

    Every instance is ambiguous with one extra label; minority-class
    instances receive the majority class as the extra with probability
    ``prob_majority`` (a random other class otherwise), and majority-class
    instances receive a random extra.
    """
    spec = mcar.ConvexHullSpec(
        num_classes=num_classes,
        vertices_per_class=vertices,
        ambient_dim=dim,
        samples_per_class=per_class,
        vertex_separation=separation,
        seed=seed,
    )
    res = mcar.gen_convex_hull_data(spec)
    rng = np.random.default_rng(seed + 10_000)
    candidates = []
    for label in res.ground_truth:
        label = int(label)
        chosen = {label}
        if label != majority:
            if rng.random() < prob_majority:
                chosen.add(majority)
            else:
                others = [i for i in range(num_classes) if i != label and i != majority]
                chosen.add(int(rng.choice(others)))
        else:
            chosen.add(int(rng.choice([i for i in range(num_classes) if i != majority])))
        candidates.append(tuple(sorted(chosen)))
    dataset = mcar.AmbiguousDataset(
        res.features, candidates, num_classes, res.ground_truth
    )
    return dataset


def tiny_brute_force_dataset(seed):
    """Six instances, three one-vertex classes, every candidate set of size 2."""
    spec = mcar.ConvexHullSpec(
        num_classes=3, vertices_per_class=1, ambient_dim=10,
        samples_per_class=2, vertex_separation=5.0, seed=seed,
    )
    params = mcar.AmbiguityParams(fraction=1.0, extra_count=1, epsilon=0.5, seed=seed)
    return mcar.synthesize_dataset(spec, params)


def contested_identity_dataset(seed, dim=12, n_anchor=8, n_null=4, noise=0.05):
    """Two instances sharing {A, null} candidates in one group.

    One anchored identity cluster (class 0) and one anchored null cluster;
    instance p1 sits on the identity cluster, p2 mixes identity and null
    pulls plus an off-span component so that rank comparisons between the
    two feasible assignments are strict.  Returns the dataset, the group
    structure, the noiseless column skeleton, and the contested pair's
    indices.
    """
    rng = np.random.default_rng(seed)
    center_a = np.zeros(dim)
    center_a[0] = 5.0
    center_n = np.zeros(dim)
    center_n[1] = 5.0
    off_span = np.zeros(dim)
    off_span[2 + seed % (dim - 2)] = 1.0
    p2_clean = 0.55 * center_a + 0.45 * center_n + 1.5 * off_span
    skeleton = np.column_stack(
        [center_a] * n_anchor + [center_n] * n_null + [center_a, p2_clean]
    )
    X = skeleton + noise * rng.normal(size=skeleton.shape)
    candidates = [(0,)] * n_anchor + [(1,)] * n_null + [(0, 1), (0, 1)]
    truth = np.array([0] * n_anchor + [1] * n_null + [0, 1])
    dataset = mcar.AmbiguousDataset(X, candidates, 2, truth)
    pair = (n_anchor + n_null, n_anchor + n_null + 1)
    groups = mcar.GroupStructure.from_partial([pair], dataset.num_instances)
    return dataset, groups, skeleton, pair


def soft_group_config(dataset):
    """Solver config with mild label sparsity for group-constraint scenarios.

    The uniqueness cap redistributes soft mass; the default sparsity level
    pins columns to simplex vertices before the constraint can act.
    """
    lam0 = mcar.default_lambda(
        dataset.num_classes, dataset.feature_dim, dataset.num_instances
    )
    return mcar.SolverConfig(gamma=0.02 * lam0)


def error_of(Y, candidates, truth):
    return mcar.labeling_error_rate(mcar.predict_labels(Y, candidates), truth)


def random_soft_labels(rng, num_classes, num_instances, max_support=None):
    """Random valid column-stochastic matrix with random candidate supports."""
    max_support = max_support or num_classes
    candidates = []
    P = np.zeros((num_classes, num_instances))
    for j in range(num_instances):
        size = int(rng.integers(1, max_support + 1))
        support = sorted(rng.choice(num_classes, size=size, replace=False).tolist())
        weights = rng.dirichlet(np.ones(size))
        P[support, j] = weights
        candidates.append(tuple(support))
    return P, candidates
