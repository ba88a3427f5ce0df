# coding: utf-8

# # Equal-norm decompositions in arbitrary bases
#
# Any finite-dimensional state splits into n orthogonal parts of equal norm.
# Counting parts that lie inside, outside or across a subspace brackets the
# expectation value of its projector.

# %%

import numpy as np

from branchcount import Projector, appendix_theorem_check, equiamplitude_decompose
from branchcount.hilbert import random_unitary

dec = equiamplitude_decompose([1.0, 0.0], 2)
print(np.round(dec.parts, 6))
print(dec.check())

# %%

rng = np.random.default_rng(3)
d = 16
psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
P = Projector.onto(random_unitary(d, rng)[:, :6])
q = np.vdot(psi, P.matrix @ psi).real / np.vdot(psi, psi).real
print("expectation", round(q, 6))

for k in range(5):
    rep = appendix_theorem_check(P, psi, 12, random_unitary(d, rng))
    print(f"basis {k}: m={rep.m:>2} r={rep.r:>2}  interval {str(rep.interval):>12}  contains: {rep.contained}")

# %% [markdown]
# A generic subspace leaves every part straddling it, so the bracket is the
# trivial [0, 1]; it still contains the expectation in every basis.
#
# A projector built from some of the parts themselves makes every part
# definite, and the count is exact.

# %%

dec = equiamplitude_decompose(psi, 8)
P3 = Projector.onto(dec.parts[:3].T)
rep = appendix_theorem_check(P3, psi, 8)
print(rep.interval, rep.quotient)
