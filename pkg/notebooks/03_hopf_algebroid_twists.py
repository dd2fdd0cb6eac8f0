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

# # The Hopf algebroid D(η*)⊗U(g) and twists
#
# Elements are truncated ℏ-series; products straighten PBW words and move
# derivatives past functions.

from dynhopf.expr import parse_scalar
from dynhopf.hopf_kernel import (HopfModel, TruncationConfig, cocycle_residual, coproduct,
                                 counit_twist_residual, moyal_twist, multiply, twisted_structures)
from dynhopf.dyn_twist import build_theta
from dynhopf.lie_core import build_sln
from dynhopf.library import sl2_model

m = sl2_model(N=3)
e, f, h, d = m.x("e"), m.x("f"), m.x("h"), m.d(1)

print("f·e =", multiply(f, e))
print("∂·λ² =", multiply(d, m.scalar(parse_scalar("l1^2"))))
print("Δ(∂²) =", coproduct(multiply(d, d)))

# Θ = exp(ℏ ∂⊗h) is a twist.

T = build_theta(m)
print(T)
print("cocycle residual zero:", cocycle_residual(T).is_zero())

# +
mm = HopfModel(build_sln(3), 2, TruncationConfig(3, 6, 4))
F = moyal_twist(mm)
tw = twisted_structures(F)
l1, l2 = parse_scalar("l1"), parse_scalar("l2")
print("λ1 * λ2 =", tw.star(l1, l2))
print("λ2 * λ1 =", tw.star(l2, l1))
print(all(x.is_zero() for x in counit_twist_residual(F)))
