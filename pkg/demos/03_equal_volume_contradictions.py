# coding: utf-8

# # Where equal-volume counting breaks
#
# Counting equal-size cells that carry any amplitude gives answers that depend
# on which partition is used.

# %%

from branchcount import RuleVariant, consistency_check
from branchcount.scenarios import FIG4_BETA, fig3_setup, fig4_setup, run

# %% [markdown]
# A field supported on a thin crescent. Both partitions contain the same
# left cell, but the second one has a strip where the field vanishes.

# %%

f, first, second, beta = fig3_setup()
res = consistency_check(f, [first, second], beta, RuleVariant.BOLTZMANN_ORIGINAL)
print([str(iv) for iv in res.intervals], res.verdict)

# %% [markdown]
# Restricting to cells that lie wholly inside the support does not help:
# with an elliptical support the two partitions still disagree.

# %%

f, nine, eighteen = fig4_setup()
res = consistency_check(f, [nine, eighteen], FIG4_BETA, RuleVariant.BOLTZMANN_SUPPORT_EXCLUDE_BORDERLINE)
print([str(iv) for iv in res.intervals], res.verdict)

# %% [markdown]
# Keeping borderline cells in one denominator but not the other can push the
# upper bound past one.

# %%

rep = run("over_unity")
mixed = rep.data["mixed"]
print("mixed rule:", mixed, " out of range:", mixed.out_of_range)
