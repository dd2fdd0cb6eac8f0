# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
#       format_version: '1.5'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# # Classical dynamical r-matrices
#
# The coth r-matrix on sl2 has a λ-independent, invariant CDYBE residual.
# Prolonging it to Λ = ∂∧h + r gives a bivector with [Λ,Λ] ≠ 0 but
# [X,[Λ,Λ]] = 0 for every generator X.

from dynhopf.dyn_exterior import cdybe_residual, coth_r, prolong_lambda, r_matroid_residual
from dynhopf.lie_core import build_sl2, build_sln
from dynhopf.library import cross_validate, r_library

# +
r = coth_r(build_sl2())
print("r =", r)
rep = cdybe_residual(r, nsamples=7, seed=0)
print(rep.classification, rep.constant, "spread", rep.spread)
# -

# +
L = prolong_lambda(r)
LL, per = r_matroid_residual(L)
print("[Λ,Λ] =", LL)
print("all [X,[Λ,Λ]] vanish:", all(x.is_zero() for x in per))
# -

# sl3 has three positive roots, so three terms.

print(coth_r(build_sln(3)))
print(cdybe_residual(coth_r(build_sln(3))).classification)

# Sign conventions: the residual vanishes exactly when [Λ,Λ] does.

for name, cand in r_library().items():
    print(f"{name:20s}", cross_validate(cand))
