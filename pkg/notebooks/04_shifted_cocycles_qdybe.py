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

# # Shifted cocycles and the quantum dynamical Yang-Baxter equation

import random
from fractions import Fraction

from dynhopf.dyn_twist import (DynamicalR, WeightModule, make_dynamical_twistor, qdybe_residual,
                               shifted_cocycle_residual, twisted_base_residual)
from dynhopf.hopf_kernel import cocycle_residual
from dynhopf.library import antisymmetric_defect, random_zero_weight_twist, rational_shifted_cocycle, sl2_model
from dynhopf.lie_core import build_sl2
from dynhopf.scalar import ScalarFunction

m = sl2_model(N=2)
F = rational_shifted_cocycle(m)
print(F)
print("shifted cocycle:", shifted_cocycle_residual(F).passed)
print("F·Θ is a twist:", cocycle_residual(make_dynamical_twistor(F)).is_zero())

# The base of F·Θ stays commutative and α becomes a shift by ℏh.

res = twisted_base_residual(F, [ScalarFunction.lam(1), ScalarFunction.lam(1) ** 2])
print(all(v.is_zero() for v in res.values()))

# +
V = WeightModule.fundamental(build_sl2(), 2)
R = DynamicalR.from_twist(F, V)
print("QDYBE residual zero:", qdybe_residual(R).is_zero())

broken = F + antisymmetric_defect(m, Fraction(2), ScalarFunction.const(1))
print("broken, shifted cocycle fails at ℏ^", shifted_cocycle_residual(broken).first_order)
print("broken, QDYBE fails at ℏ^", qdybe_residual(DynamicalR.from_twist(broken, V)).first_order())
# -

# Random zero-weight F: both sides fail, or hold, together.

m3 = sl2_model(N=3)
rng = random.Random(1)
for _ in range(5):
    G, k = random_zero_weight_twist(m3, rng)
    a = shifted_cocycle_residual(G).first_order
    b = cocycle_residual(make_dynamical_twistor(G)).first_order()
    print(k, a, b)
