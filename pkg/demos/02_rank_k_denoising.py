"""
Best rank-k approximation as a denoiser
=======================================

The rank-k approximation of the data matrix moves each column much closer
to its true center than the raw sample is.
"""

# %%
import numpy as np

from projclust import MixtureParams, block_centers, frobenius_norm_sq, rank_k_approx, sample_mixture
from projclust.evaluation import frobenius_bound_check

params = MixtureParams(block_centers(3, 400, 0.5), [1 / 3] * 3, sigma_sq=0.5)
data = sample_mixture(params, 400, seed=1)

res = rank_k_approx(data.values, 3)
print("leading singular values", np.round(res.singular_values[:6], 2))

# %%
raw = frobenius_norm_sq(data.values - data.expected)
denoised = frobenius_norm_sq(res.approx - data.expected)
print(f"||A - E(A)||_F^2     = {raw:9.1f}")
print(f"||A^(k) - E(A)||_F^2 = {denoised:9.1f}")

# %%
# The rank argument gives ||A^(k) - E(A)||_F^2 <= 8 k ||A - E(A)||^2 for any matrix.
rep = frobenius_bound_check(data, 3)
print(f"measured {rep.measured:.1f} <= bound {rep.context['raw_bound']:.1f}: {rep.satisfied}")

# %%
# The block power iteration gives the same approximation.
power = rank_k_approx(data.values, 3, method="power")
print("power vs full difference", np.linalg.norm(power.approx - res.approx))
