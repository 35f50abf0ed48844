"""
l2-squared clustering by local search
=====================================

Compare the local-search solver with exhaustive enumeration on small
random instances.
"""

# %%
import numpy as np

from projclust import brute_force_l22, solve_l22

rng = np.random.default_rng(0)
ratios = []
for i in range(100):
    X = rng.standard_normal((int(rng.integers(4, 11)), 2))
    k = int(rng.integers(2, 4))
    ratios.append(solve_l22(X, k, seed=i).cost / brute_force_l22(X, k).cost)
ratios = np.array(ratios)
print(f"optimal on {np.mean(ratios < 1 + 1e-9):.0%} of instances, worst ratio {ratios.max():.3f}")

# %%
# The cost trajectory only ever goes down: initial centers, Lloyd updates,
# then accepted swaps each followed by more Lloyd updates.
X = np.vstack([rng.standard_normal((40, 2)) + off for off in ([0, 0], [6, 0], [0, 6])])
sol = solve_l22(X, 3, seed=3)
print("cost history", np.round(sol.cost_history, 2))
