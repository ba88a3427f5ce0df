# coding: utf-8

# # Interval probabilities on a 10 x 3 grid of cells
#
# Each cell counts as one branch. For a macrostate, cells lying wholly in it
# give the lower count and cells straddling its boundary widen the interval.

# %%

from branchcount import generalized_additivity_check, interval_probability
from branchcount.scenarios import FIG2_BETA, FIG2_BETA_DOUBLE_PRIME, FIG2_BETA_PRIME, fig2_setup

f, e = fig2_setup()
print("cells:", e.n)

# %%

for name, region in (("beta", FIG2_BETA), ("beta'", FIG2_BETA_PRIME), ("beta''", FIG2_BETA_DOUBLE_PRIME)):
    print(f"{name:>7}: {interval_probability(f, e, region)}")

# %% [markdown]
# Two disjoint macrostates that never share a straddling cell add exactly.

# %%

a = generalized_additivity_check(f, e, FIG2_BETA, FIG2_BETA_PRIME)
print("union", a.mu_union, " sum", a.sum, " equal:", a.exact_additivity)

# %% [markdown]
# When three straddling cells are shared, the union is pinned down more
# tightly than the sum of the parts.

# %%

b = generalized_additivity_check(f, e, FIG2_BETA, FIG2_BETA_DOUBLE_PRIME)
print("union", b.mu_union, " sum", b.sum, " shared cells:", b.shared_cells,
      " subset:", b.mu_union.issubset(b.sum))
