"""A family that adds up, one that does not, and what coarse-graining does to each."""

import numpy as np

from qfound import histories as H
from qfound.linalg import random_density, random_unitary

bad = H.sigma_x_then_z_family()
print("sigma_x then sigma_z probabilities:", H.family_probabilities(bad))
print("largest cross term:", H.consistency_matrix(bad).max_violation)
for row in H.additivity_report(bad, [[[0, 1]], [[0], [1]]]):
    print(f"  merged history {row.history}: p={row.probability:.3f}, parents sum to {row.parent_sum:.3f}, delta={row.delta:+.3f}")

rng = np.random.default_rng(3)
grid = H.TimeGrid([1, 2, 3], [random_unitary(rng, 3) for _ in range(3)])
good = H.build_consistent_family(random_density(rng, (3,)), grid)
probs = H.family_probabilities(good)
print("\neigenbasis family, nonzero histories:")
for h, p in probs.items():
    if p > 1e-12:
        print(f"  {h}: {p:.6f}")
print("largest cross term:", H.consistency_matrix(good).max_violation)
grouping = [[[0], [1], [2]], [[0, 1], [2]], [[0], [1], [2]]]
worst = max(abs(r.delta) for r in H.additivity_report(good, grouping))
print("after merging two projectors at t2, worst additivity defect:", worst)
