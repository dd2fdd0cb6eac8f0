"""Named constructions used by the CLI presets, the notebooks and the tests.

Everything here is built from the public operations of the other modules;
nothing is special-cased.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .dyn_exterior import Multivector, alt_dr, ambient, coth_r, prolong_lambda, schouten
from .hopf_kernel import HopfModel, TensorElement, exp_series, multiply
from .lie_core import LieAlgebra, build_sl2, build_sln
from .scalar import ScalarFunction


def cross_validate(r: Multivector) -> Tuple[bool, bool]:
    """(CDYBE residual ≡ 0, [Λ, Λ] = 0 for Λ = prolong_lambda(r)), both exact."""
    res = alt_dr(r) - schouten(r, r) * Fraction(1, 2)
    L = prolong_lambda(r)
    return res.is_zero(), schouten(L, L).is_zero()


def r_library() -> Dict[str, Multivector]:
    """Zero-weight candidates on sl2 (k=1) and sl3 (k=2), triangular or not."""
    g = build_sl2()
    amb = ambient(g, 1)
    l = ScalarFunction.lam(1)
    one = ScalarFunction.const(1)

    def ef(c):
        return Multivector.from_raw(amb, [(c, (amb.lie_gen(0), amb.lie_gen(1)))])

    return {
        "zero": Multivector(amb),
        "coth_sl2": coth_r(g),
        "coth_sl2_trace": coth_r(g, form="trace"),
        "coth_sl3": coth_r(build_sln(3)),
        "rational": ef(-one / l),
        "rational_shifted": ef(-one / (l + ScalarFunction.const(3))),
        "rational_scaled": ef(ScalarFunction.const(-2) / l),
        "rational_perturbed": ef(-one / l + one),
        "linear": ef(l),
        "constant": ef(one),
    }


# -- shifted cocycles over sl2 ---------------------------------------------

def _sl2_parts(model: HopfModel):
    return model.x("e"), model.x("f"), model.x("h")


def rational_shifted_cocycle(model: HopfModel, shift=0) -> TensorElement:
    """F = 1 + ℏ f⊗e/μ + ℏ²(½ f²⊗e² - f⊗eh)/μ², μ = λ₁ + shift.

    Solves the shifted cocycle equation exactly modulo ℏ³ (sl2, k = 1).
    """
    e, f, h = _sl2_parts(model)
    mu = ScalarFunction.lam(1) + ScalarFunction.const(shift)
    inv = ScalarFunction.const(1) / mu
    two = (model.tensor(multiply(f, f), multiply(e, e)).scale(Fraction(1, 2))
           - model.tensor(f, multiply(e, h)))
    return model.one(2) + model.tensor(f, e).scale(inv).shift(1) + two.scale(inv * inv).shift(2)


def antisymmetric_defect(model: HopfModel, eps, phi: ScalarFunction, shift=0) -> TensorElement:
    """ℏ·eps·φ(λ)/(λ₁+shift)·(e⊗f - f⊗e), an order-ℏ perturbation."""
    e, f, _ = _sl2_parts(model)
    mu = ScalarFunction.lam(1) + ScalarFunction.const(shift)
    c = (phi / mu).scale(eps)
    return (model.tensor(e, f) - model.tensor(f, e)).scale(c).shift(1)


DEFECT_EPS = tuple(Fraction(x) for x in ("-3", "-2", "-1", "-1/2", "-1/3", "1/3", "2/3", "1", "2", "3"))


def defect_pair(model: HopfModel, rng: random.Random) -> Tuple[TensorElement, TensorElement, dict]:
    """A valid rational shifted cocycle and an antisymmetrically broken copy.

    eps = 1/2 is excluded: with φ = 1 it cancels Alt f entirely, so R = 1 + O(ℏ²)
    and the QDYBE holds at ℏ² although the cocycle equation does not.
    """
    shift = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    eps = rng.choice(DEFECT_EPS)
    mu = ScalarFunction.lam(1) + ScalarFunction.const(shift)
    phis = {"1": ScalarFunction.const(1), "1/mu": ScalarFunction.const(1) / mu, "l1": ScalarFunction.lam(1)}
    name = rng.choice(sorted(phis))
    F = rational_shifted_cocycle(model, shift)
    broken = F + antisymmetric_defect(model, eps, phis[name], shift)
    return F, broken, {"shift": shift, "eps": eps, "phi": name}


def random_zero_weight_twist(model: HopfModel, rng: random.Random) -> Tuple[TensorElement, Optional[int]]:
    """exp(ℏ a h⊗h)·(1 + ℏ^m G) with G a random zero-weight element, λ-linear coefficients.

    Returns (F, m); m is None when no G is attached.
    """
    e, f, h = _sl2_parts(model)
    one = model.one()
    basis = [(h, one), (one, h), (e, f), (f, e), (h, h), (multiply(e, f), one), (h, multiply(h, h))]
    a = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    F0 = exp_series(model.tensor(h, h).scale(a).shift(1))
    m = rng.choice([1, 2, 3, None])
    if m is None:
        return F0, None
    l = ScalarFunction.lam(1)
    G = model.zero(2)
    for x, y in rng.sample(basis, 2):
        G = G + model.tensor(x, y).scale(ScalarFunction.const(rng.randint(-2, 2)) + l.scale(rng.randint(-2, 2)))
    return multiply(F0, model.one(2) + G.shift(m)), m


def sl2_model(N: int = 4, k: int = 1, **caps) -> HopfModel:
    from .hopf_kernel import TruncationConfig
    return HopfModel(build_sl2(), k, TruncationConfig(N, caps.get("diff_cap", 6), caps.get("pbw_cap", 6)))


def algebra_for_rank(n: int) -> LieAlgebra:
    return build_sl2() if n == 2 else build_sln(n)
