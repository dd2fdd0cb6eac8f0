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

# # Classical limits
#
# δ on functions and sections is read off the ℏ¹ coefficients of a deformation.

from dynhopf.classical_limit import (DeformationData, base_poisson, coboundary_agreement, extract_delta_f,
                                     extract_delta_X, limit_axiom_suite, twist_limit)
from dynhopf.dyn_twist import build_theta, make_dynamical_twistor
from dynhopf.hopf_kernel import HopfModel, TruncationConfig, moyal_twist, multiply
from dynhopf.library import rational_shifted_cocycle, sl2_model
from dynhopf.lie_core import build_sln
from dynhopf.scalar import ScalarFunction

m = sl2_model(N=2)
F = make_dynamical_twistor(rational_shifted_cocycle(m))
D = DeformationData.from_twist(F)
print("Λ =", twist_limit(F))
print("δλ1 =", extract_delta_f(D, ScalarFunction.lam(1)))
print("δe =", extract_delta_X(D, m.x("e")))

print(limit_axiom_suite(D).passed)
print(all(v.is_zero() for v in coboundary_agreement(F).values()))

# A Poisson base from the Moyal twist.

mm = HopfModel(build_sln(3), 2, TruncationConfig(2, 4, 4))
Dm = DeformationData.from_twist(moyal_twist(mm))
print("{λ1, λ2} =", base_poisson(Dm, ScalarFunction.lam(1), ScalarFunction.lam(2)))

# Tampering with α is caught.

bad = DeformationData.from_twist(build_theta(m)).with_alpha_defect(lambda f: multiply(m.x("e"), m.scalar(f)))
print(limit_axiom_suite(bad).failures[:4])
