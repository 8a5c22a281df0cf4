# %% [markdown]
# # Figure data
#
# Writes the three figure CSVs (normalization ratio, R(eps)/eps^2, scaled
# bounds) plus matplotlib scripts into ./figs.  Same as `pi-hl figures --out figs`.

# %%
from pathlib import Path

from pihl.cli import main

out = Path("figs")
out.mkdir(exist_ok=True)
main(["figures", "--out", str(out)])

# %% [markdown]
# The bound figure shows bound1 with the default (alpha, L) staying slightly
# below bound2 until N*delta of a few 1e5; see the README.

# %%
print((out / "fig_bound.csv").read_text().splitlines()[:6])
