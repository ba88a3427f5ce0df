# coding: utf-8

# # Equal-weight counting agrees with the squared-amplitude measure
#
# For equal-weight ensembles the squared-amplitude share of a macrostate always
# lies inside the counted interval, so intervals from different ensembles
# always overlap.

# %%

import numpy as np

from branchcount import born_quantity, consistency_check, equiamplitude_partition, interval_probability
from branchcount.scenarios import random_field, random_region, run

rng = np.random.default_rng(2024)
f = random_field(rng, dim=2)
beta = random_region(rng, f.space)
p = born_quantity(f, beta)
print("grid", f.space.resolution, " squared-amplitude share", round(p, 6))

# %%

family = [equiamplitude_partition(f, n, axis=n % 2) for n in (4, 16, 64, 256)]
for e in family:
    iv = interval_probability(f, e, beta)
    print(f"n = {e.n:>3}: {str(iv):>20}  width {float(iv.width):.4f}  contains: {iv.contains_real(p, 1e-9)}")

res = consistency_check(f, family, beta)
print("common part:", res.intersection, res.verdict)

# %% [markdown]
# Counting outcomes instead of weighted branches gives a different number.

# %%

report = run("graham_vs_born")
print({k: str(v) for k, v in report.data.items()})
