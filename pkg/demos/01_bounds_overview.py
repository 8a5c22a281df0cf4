# %% [markdown]
# # Where the pi-corrected limit sits
#
# For n uses of a phase gate with generator span 1 the textbook Heisenberg
# limit is 1/n.  With a prior of width delta the attainable RMS error is
# closer to pi/n.  This script tabulates the lower bounds next to both
# references.

# %%
import math

import numpy as np

from pihl import BoundInputs, bound_report, crossover

print(f"bound2 turns positive at N*delta = {crossover():.4f}")

# %%
print(f"{'N':>8} {'1/N':>10} {'pi/N':>10} {'sqrt(bound2)':>13} {'sqrt(bound1)':>13}")
for N in [30, 100, 1000, 10_000, 100_000]:
    r = bound_report(BoundInputs(float(N), 1.0))
    b1 = math.sqrt(max(r.bound1_raw, 0.0))
    print(f"{N:>8} {r.conventional_hl:>10.3e} {r.pi_hl:>10.3e} {math.sqrt(r.bound2):>13.3e} {b1:>13.3e}")

# %% [markdown]
# Both bounds approach pi/N from below.  Scaled by N/pi the approach is slow,
# of order sqrt(log(N delta)/(N delta)):

# %%
for x in np.geomspace(30, 1e6, 6):
    r = bound_report(BoundInputs(x, 1.0))
    print(f"N*delta={x:10.0f}  N*sqrt(bound2)/pi = {x * math.sqrt(r.bound2) / math.pi:.4f}")
