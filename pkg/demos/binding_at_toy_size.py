"""
How often can a cheater open both ways?
=======================================

At toy seed lengths the whole challenge space fits in memory, so the
fraction of challenges that admit a double opening can be counted exactly
and set against the analytic bound.
"""

from naorcommit.commitments import NaorParams, naor_commit, naor_verify
from naorcommit.expansion import TOY, enumerate_seeds, expand
from naorcommit.oracle import (
    binding_fraction_naor,
    binding_fraction_string,
    binding_fraction_twobit,
    verify_theorem1,
    verify_theorem2,
)

# %%
# Exact fractions
# ---------------

for report in (binding_fraction_naor(2), binding_fraction_naor(3), binding_fraction_twobit(2),
               binding_fraction_string(2, 2)):
    print(report.format())
    print()

# %%
# A concrete double opening
# -------------------------
# A bad challenge is one where r = G(x0) xor G(x1). Both openings verify.

x0, x1 = list(enumerate_seeds(2))[:2]
params = NaorParams(2, expand(TOY, x0, 6) ^ expand(TOY, x1, 6), TOY)
c = naor_commit(params, 0, x0)
print("r =", params.r.to_str(), " opens as 0:", naor_verify(params, c, 0, x0), " as 1:", naor_verify(params, c, 1, x1))

# %%
# The circulant rank facts behind the string scheme
# -------------------------------------------------

for r in [verify_theorem1(n) for n in (2, 4, 8)] + [verify_theorem2(8), verify_theorem2(16)]:
    print(r.format())
