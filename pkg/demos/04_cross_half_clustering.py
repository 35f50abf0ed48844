"""
Clustering with cross-half projections
======================================

Each half of the samples is assigned using centers estimated from the
other half. The two labelings are merged by matching center sets.
"""

# %%
import time

import numpy as np

from projclust import MixtureParams, accuracy, block_centers, cluster_run, sample_mixture

params = MixtureParams(block_centers(3, 400, 0.5), [1 / 3] * 3, sigma_sq=0.5)
for seed in range(5):
    data = sample_mixture(params, 400, seed)
    t0 = time.perf_counter()
    run = cluster_run(data.values, 3, seed)
    acc = accuracy(run.clustering, data.labels).accuracy
    print(f"seed {seed}: accuracy {acc:.3f} in {time.perf_counter() - t0:.2f}s")

# %%
# Separation can shrink a long way before recovery breaks down.
for level in (0.3, 0.1, 0.07, 0.05, 0.03):
    params = MixtureParams(block_centers(3, 400, level), [1 / 3] * 3, sigma_sq=0.5)
    accs = [accuracy(cluster_run(sample_mixture(params, 400, s).values, 3, s).clustering,
                     sample_mixture(params, 400, s).labels).accuracy for s in range(5)]
    print(f"block level {level:<5}: squared gap {2 * 133 * level**2:6.2f}, "
          f"mean accuracy {np.mean(accs):.3f}")
