"""Why stacking labels on features gives a low-rank matrix.

Each class is a convex hull of a few vertices; every sample is a convex
combination of its class's vertices.  Stacking the one-hot labeling matrix
on top of the features keeps the factorization, so the stacked matrix has
rank at most the total number of hull vertices, no matter how many samples
are drawn.
"""

import numpy as np

import mcar

spec = mcar.ConvexHullSpec(
    num_classes=4,
    vertices_per_class=(1, 2, 3, 2),
    ambient_dim=30,
    samples_per_class=25,
    seed=0,
)
result = mcar.gen_convex_hull_data(spec)

total_vertices = sum(spec.vertices_per_class)
stacked = np.vstack([result.one_hot_labels, result.clean_features])
print(f"stacked matrix: {stacked.shape[0]} rows x {stacked.shape[1]} columns")
print(f"total hull vertices: {total_vertices}")
print(f"numerical rank of [labels; features]: "
      f"{mcar.rank_check(result.one_hot_labels, result.clean_features)}")

print("\nthe factorization is exact:")
reconstruction = result.vertices @ result.hull_coefficients
print(f"  max |features - vertices @ coefficients| = "
      f"{np.abs(result.clean_features - reconstruction).max():.2e}")

labels_from_coeffs = result.vertex_classes @ result.hull_coefficients
print(f"  max |one-hot labels - class map @ coefficients| = "
      f"{np.abs(result.one_hot_labels - labels_from_coeffs).max():.2e}")

print("\nrank stays bounded as sample counts grow:")
for per_class in (10, 40, 160):
    bigger = mcar.gen_convex_hull_data(
        mcar.ConvexHullSpec(
            num_classes=4,
            vertices_per_class=(1, 2, 3, 2),
            ambient_dim=30,
            samples_per_class=per_class,
            seed=1,
        )
    )
    rank = mcar.rank_check(bigger.one_hot_labels, bigger.clean_features)
    print(f"  N = {4 * per_class:4d}: rank = {rank} (bound {total_vertices})")
