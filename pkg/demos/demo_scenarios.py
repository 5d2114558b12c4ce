"""Scenario builders shared by the demonstration scripts."""

import numpy as np

import mcar


def majority_extra(seed, num_classes=4, per_class=15, majority=0, prob=0.9):
    """Every instance ambiguous; one class rides along in most candidate sets."""
    spec = mcar.ConvexHullSpec(
        num_classes=num_classes, vertices_per_class=2, ambient_dim=30,
        samples_per_class=per_class, vertex_separation=2.5, seed=seed,
    )
    generated = mcar.gen_convex_hull_data(spec)
    rng = np.random.default_rng(seed + 10_000)
    candidates = []
    for label in generated.ground_truth:
        label = int(label)
        if label != majority and rng.random() < prob:
            extra = majority
        else:
            pool = [i for i in range(num_classes) if i not in (label, majority)]
            extra = int(rng.choice(pool or [majority]))
        candidates.append(tuple(sorted({label, extra})))
    return mcar.AmbiguousDataset(
        generated.features, candidates, num_classes, generated.ground_truth
    )


def contested_pair(seed, dim=12, n_identity=8, n_null=4, noise=0.05):
    """Two instances sharing {identity, null} candidates inside one group."""
    rng = np.random.default_rng(seed)
    center_a = np.zeros(dim)
    center_a[0] = 5.0
    center_n = np.zeros(dim)
    center_n[1] = 5.0
    off_span = np.zeros(dim)
    off_span[2 + seed % (dim - 2)] = 1.0
    lookalike = center_a + 0.0  # p1 sits on the identity cluster
    passerby = 0.55 * center_a + 0.45 * center_n + 1.5 * off_span
    skeleton = np.column_stack(
        [center_a] * n_identity + [center_n] * n_null + [lookalike, passerby]
    )
    X = skeleton + noise * rng.normal(size=skeleton.shape)
    candidates = [(0,)] * n_identity + [(1,)] * n_null + [(0, 1), (0, 1)]
    truth = np.array([0] * n_identity + [1] * n_null + [0, 1])
    dataset = mcar.AmbiguousDataset(X, candidates, 2, truth)
    pair = (n_identity + n_null, n_identity + n_null + 1)
    groups = mcar.GroupStructure.from_partial([pair], dataset.num_instances)
    return dataset, groups, pair
