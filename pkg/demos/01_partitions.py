# coding: utf-8

# # Equal-volume and equal-weight partitions
#
# A wave field here is a grid of complex samples on a box. Two ways of cutting
# the box into n cells are available: cells of equal size, and cells that each
# carry the same share of the total squared amplitude.

# %%

import numpy as np

from branchcount import ParameterSpace, WaveField, equiamplitude_partition, equivolume_partition, validate

# %% [markdown]
# A 1D field whose squared amplitude puts 0.2 of the mass on the left half and
# 0.8 on the right half.

# %%

line = ParameterSpace(((0.0, 1.0),), (2,))
f = WaveField(line, [np.sqrt(0.4), np.sqrt(1.6)])
print("total weight", f.total_weight)

# %%

ev = equivolume_partition(line, 5, field=f)
ea = equiamplitude_partition(f, 5)
for name, e in (("equal volume", ev), ("equal weight", ea)):
    cuts = [round(c.box[0][1], 6) for c in e.cells[:-1]]
    print(f"{name:>12}: cuts {cuts}  weights {np.round(e.cell_weights(), 6)}")

# %% [markdown]
# The first equal-weight cell swallows the whole left half; the right half is
# cut into four pieces of length 1/8.
#
# In 2D the equal-weight cells come from recursive bisection on alternating
# axes, so every cell is a rectangle.

# %%

rng = np.random.default_rng(0)
sq = ParameterSpace(((0.0, 2.0), (0.0, 1.0)), (40, 20))
x, y = np.meshgrid(*[0.5 * (e[1:] + e[:-1]) for e in sq.edges], indexing="ij")
g = WaveField(sq, np.exp(-((x - 0.6) ** 2 + (y - 0.4) ** 2) / 0.1) * np.exp(3j * x))

e7 = equiamplitude_partition(g, 7)
rep = validate(e7)
print("cells:", len(e7.cells), " ok:", rep.ok)
print("max weight deviation / W:", rep.max_weight_deviation / g.total_weight)
for c in e7.cells:
    (x0, x1), (y0, y1) = c.box
    print(f"  [{x0:.3f}, {x1:.3f}] x [{y0:.3f}, {y1:.3f}]  area {c.measure:.3f}")
