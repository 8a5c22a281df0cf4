# %% [markdown]
# # Reaching pi/n with a covariant measurement
#
# The covariant MSE of a probe is c^T A c with the Toeplitz matrix
# a_0 = pi^2/3, a_m = 2(-1)^m/m^2.  Its lowest eigenvector is the best
# probe; n * rmse climbs towards pi from below.

# %%
import math

from pihl import covariant_mse, optimal_probe, scaling_sweep, sine_state

for row in scaling_sweep([1, 2, 5, 10, 50, 100, 200, 400]):
    b2 = "" if row.bound2_delta1 is None else f"{row.bound2_delta1:.3e}"
    print(f"n={row.n:4d}  mse={row.mse:.4e}  n*rmse/pi={row.n_rmse / math.pi:.4f}  bound2={b2}")

# %% [markdown]
# The sine state is close to optimal but not equal to it:

# %%
for n in [10, 100, 300]:
    _, opt = optimal_probe(n)
    sine = covariant_mse(sine_state(n))
    print(f"n={n:4d}  (sine - optimal)/optimal = {(sine - opt) / opt:.2e}")
