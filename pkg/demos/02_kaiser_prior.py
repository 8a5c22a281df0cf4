# %% [markdown]
# # The Kaiser prior
#
# p_{alpha,L} is bandlimited to [-L/2, L/2] in ordinary frequency while its
# mass outside the core |phi| < 4 alpha/L is of order exp(-4 pi alpha).
# Its normalization is tiny, so the density is built in log space.

# %%
import numpy as np

from pihl.priors import (
    KaiserPrior,
    bandwidth_excess,
    kaiser_normalization,
    kaiser_normalization_asymptote,
    kaiser_normalization_series,
    kaiser_tail_mass,
    kaiser_tail_mass_bound,
    kaiser_total_mass,
)

for alpha in [1.0, 2.0, 3.0, 4.0, 6.0]:
    n = kaiser_normalization(alpha)
    series = kaiser_normalization_series(alpha)
    print(f"alpha={alpha:3.1f}  N={n:.4e}  N/asymptote={n / kaiser_normalization_asymptote(alpha):.4f}"
          f"  N/series-1={n / series - 1:+.1e}")

# %% [markdown]
# The six-term series is good to 1e-6 from alpha = 3 on and poor at alpha = 1.

# %%
p = KaiserPrior.create(2.0, 8.0)
print("total mass      ", kaiser_total_mass(p))
print("tail mass       ", kaiser_tail_mass(p))
print("tail mass bound ", kaiser_tail_mass_bound(2.0))
print("max |FT| beyond L/2:", bandwidth_excess(p))

# %%
phi = np.linspace(-3 * p.core_halfwidth, 3 * p.core_halfwidth, 13)
for x, d in zip(phi, p.density(phi)):
    print(f"{x:+.3f}  {d:.3e}")
