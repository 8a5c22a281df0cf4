# %% [markdown]
# # NOON states do not help over a fixed prior
#
# A NOON state maximizes the Fisher information, but its outcome density is
# pi/n periodic, so on a flat prior the estimate is ambiguous and the MSE
# stays near pi^2/3 for every n.

# %%
import math

import numpy as np

from pihl import covariant_mse, noon_state, sample_outcome

for n in [1, 2, 3, 10, 100]:
    exact = math.pi**2 / 3 + 2 * (-1) ** n / n**2
    print(f"n={n:4d}  mse={covariant_mse(noon_state(n)):.6f}  closed form={exact:.6f}")

# %% Monte-Carlo check with a fixed seed
s = noon_state(10)
draws = sample_outcome(s, 0.0, seed=7, size=100_000)
sq = draws**2
print(f"MC {sq.mean():.4f} +- {sq.std(ddof=1) / np.sqrt(sq.size):.4f}, exact {covariant_mse(s):.4f}")
