"""
Rotation invariance
===================

Rotating every sample by the same orthogonal matrix leaves the partition
unchanged. Only distances and inner products enter the algorithm.
"""

# %%
from scipy.stats import ortho_group

from projclust import Family, MixtureParams, accuracy, block_centers, cluster, sample_mixture

params = MixtureParams(block_centers(3, 400, 0.5), [1 / 3] * 3, 0.5, Family.GAUSSIAN)
Q = ortho_group.rvs(400, random_state=0)
for seed in range(5):
    data = sample_mixture(params, 400, seed)
    plain = cluster(data.values, 3, seed)
    rotated = cluster(Q @ data.values, 3, seed)
    print(f"seed {seed}: agreement {accuracy(plain, rotated.assignment).accuracy:.3f}, "
          f"accuracy {accuracy(plain, data.labels).accuracy:.3f}")
