import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dynhopf.dyn_twist import (DynamicalR, NotZeroWeight, OpSeries, WeightModule, build_theta, delta_lambda,
                               is_zero_weight, make_dynamical_twistor, projection_T, qdybe_residual,
                               quasi_hopf_coproduct, rep_operator, shift_conjugation_residual,
                               shifted_cocycle_residual, taylor_shift, twisted_base_residual)
from dynhopf.expr import parse_scalar
from dynhopf.hopf_kernel import (ArityMismatch, HopfModel, TruncationConfig, cocycle_residual, coproduct,
                                 counit_twist_residual, multiply)
from dynhopf.library import antisymmetric_defect, defect_pair, random_zero_weight_twist, rational_shifted_cocycle, sl2_model
from dynhopf.lie_core import build_sl2, build_sln
from dynhopf.scalar import ScalarFunction

L1 = ScalarFunction.lam(1)


@pytest.fixture(scope="module")
def m2():
    return sl2_model(N=2)


@pytest.fixture(scope="module")
def m3():
    return sl2_model(N=3)


# -- Θ -------------------------------------------------------------------------

def test_theta_explicit(m2):
    d, h = m2.d(1), m2.x("h")
    want = (m2.one(2) + m2.tensor(d, h).shift(1)
            + m2.tensor(multiply(d, d), multiply(h, h)).scale(Fraction(1, 2)).shift(2))
    assert build_theta(m2) == want


@pytest.mark.parametrize("g,k,N", [(build_sl2(), 1, 4), (build_sln(3), 2, 3), (build_sln(3), 1, 4)])
@pytest.mark.parametrize("variant", ["normal", "weyl"])
def test_theta_is_a_twist(g, k, N, variant):
    m = HopfModel(g, k, TruncationConfig(N, 8, 8))
    T = build_theta(m, variant)
    assert cocycle_residual(T).is_zero()
    assert all(r.is_zero() for r in counit_twist_residual(T))


def test_theta_needs_cartan():
    from dynhopf.dyn_twist import theta
    m = HopfModel(build_sl2(), 2, TruncationConfig(1, 2, 2))
    with pytest.raises(ValueError):
        theta(m)


# -- shifts ----------------------------------------------------------------------------

def test_taylor_shift_example(m2):
    e, f, h = m2.x("e"), m2.x("f"), m2.x("h")
    c = parse_scalar("exp(l1)")
    F = m2.tensor(e, f).scale(c)
    got = taylor_shift(F, 3)
    want = (m2.tensor(e, f, m2.one()).scale(c) + m2.tensor(e, f, h).scale(c).shift(1)
            + m2.tensor(e, f, multiply(h, h)).scale(c.scale(Fraction(1, 2))).shift(2))
    assert got == want
    got1 = taylor_shift(F, 1, Fraction(-1, 2))
    assert got1.hbar_part(1) == m2.tensor(h, e, f).scale(c.scale(Fraction(-1, 2)))


def test_taylor_shift_rejects_derivatives(m2):
    with pytest.raises(ArityMismatch):
        taylor_shift(m2.tensor(m2.d(1), m2.one()), 3)


def test_shift_conjugation(m3):
    # slot 3 of F¹² is 1, so the identity needs no weight condition
    rng = random.Random(3)
    for _ in range(4):
        F, _ = random_zero_weight_twist(m3, rng)
        assert shift_conjugation_residual(F).is_zero()
    e = m3.x("e")
    assert shift_conjugation_residual(m3.tensor(e, e).scale(L1)).is_zero()
    assert not shift_conjugation_residual(m3.tensor(e, e).scale(L1), build_theta(m3, "weyl")).is_zero()


# -- shifted cocycles ---------------------------------------------------------------------

def test_rational_solution(m2):
    F = rational_shifted_cocycle(m2)
    assert is_zero_weight(F)
    assert shifted_cocycle_residual(F).passed


def test_rational_solution_is_only_second_order(m3):
    assert shifted_cocycle_residual(rational_shifted_cocycle(m3)).first_order == 3


def test_not_zero_weight(m2):
    e = m2.x("e")
    with pytest.raises(NotZeroWeight):
        shifted_cocycle_residual(m2.one(2) + m2.tensor(e, e).shift(1))


def test_constant_first_order_term(m2):
    e, f = m2.x("e"), m2.x("f")
    # constant r: the ℏ¹ equation is the ordinary cocycle condition, which holds
    res = shifted_cocycle_residual(m2.one(2) + m2.tensor(e, f).shift(1))
    assert res.first_order == 2


@given(st.integers(0, 10 ** 6))
@settings(max_examples=15)
def test_equivalence_with_twistor(m3, seed):
    F, _ = random_zero_weight_twist(m3, random.Random(seed))
    for variant in ("normal", "weyl"):
        a = shifted_cocycle_residual(F, variant).first_order
        b_res = cocycle_residual(make_dynamical_twistor(F, variant)).first_order()
        c1, c2 = counit_twist_residual(make_dynamical_twistor(F, variant))
        orders = [o for o in (b_res, c1.first_order(), c2.first_order()) if o is not None]
        assert a == (min(orders) if orders else None)


def test_equivalence_rational(m2):
    cF = make_dynamical_twistor(rational_shifted_cocycle(m2))
    assert cocycle_residual(cF).is_zero()


def test_twistor_composition_order(m2):
    F = rational_shifted_cocycle(m2)
    assert make_dynamical_twistor(F) == multiply(F, build_theta(m2))


# -- twisted base ----------------------------------------------------------------------------

FUNCS = [parse_scalar(s) for s in ("l1", "l1^2 + 1", "exp(l1/3)", "1/(l1 + 4)")]


def test_twisted_base_rational(m2):
    res = twisted_base_residual(rational_shifted_cocycle(m2), FUNCS)
    assert all(v.is_zero() for v in res.values())


def test_twisted_base_random(m3):
    rng = random.Random(11)
    seen = 0
    while seen < 3:
        F, _ = random_zero_weight_twist(m3, rng)
        counit_ok = all(r.is_zero() for r in counit_twist_residual(F))
        res = twisted_base_residual(F, FUNCS[:3])
        # only twists satisfying the counit condition keep α, β and the product untouched
        assert all(v.is_zero() for v in res.values()) == counit_ok
        seen += counit_ok


# -- projection and Δ_λ ---------------------------------------------------------------

def test_projection_kills_derivatives(m2):
    e, f, d = m2.x("e"), m2.x("f"), m2.d(1)
    assert projection_T([(multiply(d, e), f)]).is_zero()


def test_projection_example(m2):
    e, f, h = m2.x("e"), m2.x("f"), m2.x("h")
    c = parse_scalar("exp(2*l1) + l1^2")
    got = projection_T([(e.scale(c), f)])
    want = m2.zero(2)
    deriv = c
    fact = Fraction(1)
    hn = m2.one()
    for n in range(3):
        want = want + m2.tensor(e, multiply(hn, f)).scale(deriv.scale(fact)).shift(n)
        deriv = deriv.diff("l1")
        hn = multiply(hn, h)
        fact /= n + 1
    assert got == want


def test_delta_lambda_is_quasi_hopf_coproduct(m2):
    F = rational_shifted_cocycle(m2)
    for u in ("e", "f", "h"):
        x = m2.x(u)
        assert delta_lambda(x, F) == quasi_hopf_coproduct(x, F)
    h = m2.x("h")
    assert delta_lambda(h, F) == coproduct(h)


# -- QDYBE ---------------------------------------------------------------------------------------

def test_weight_module_fundamental():
    V = WeightModule.fundamental(build_sl2(), 2)
    assert V.weights == [(Fraction(1),), (Fraction(-1),)]
    g3 = build_sln(3, root_scale="matrix")
    assert WeightModule.fundamental(g3, 3).dim == 3


def test_weight_module_rejects_bad_action():
    g = build_sl2()
    V = WeightModule.fundamental(g, 2)
    bad = dict(V.action)
    bad[g.index("e")] = [[0, 0], [1, 0]]
    with pytest.raises(ValueError):
        WeightModule(g, bad)


def test_qdybe_rational(m2):
    V = WeightModule.fundamental(build_sl2(), 2)
    R = DynamicalR.from_twist(rational_shifted_cocycle(m2), V)
    assert qdybe_residual(R).is_zero()


def test_qdybe_trivial():
    V = WeightModule.fundamental(build_sl2(), 2)
    R = DynamicalR(OpSeries.identity(V, 2, 3, 1))
    assert qdybe_residual(R).is_zero() and qdybe_residual(R, "weyl").is_zero()


def test_qdybe_not_zero_weight(m2):
    V = WeightModule.fundamental(build_sl2(), 2)
    e = m2.x("e")
    with pytest.raises(NotZeroWeight):
        DynamicalR(rep_operator(m2.one(2) + m2.tensor(e, e).shift(1), V))


def test_defect_pairs_co_occur(m2):
    V = WeightModule.fundamental(build_sl2(), 2)
    rng = random.Random(0)
    for _ in range(3):
        F, broken, info = defect_pair(m2, rng)
        assert shifted_cocycle_residual(F).passed
        assert shifted_cocycle_residual(broken).first_order == 2
        assert qdybe_residual(DynamicalR.from_twist(broken, V)).first_order() == 2


def test_half_defect_is_invisible_to_qdybe(m2):
    # eps = 1/2, φ = 1: the antisymmetric part cancels the classical r, R = 1 + O(ℏ²)
    V = WeightModule.fundamental(build_sl2(), 2)
    broken = rational_shifted_cocycle(m2) + antisymmetric_defect(m2, Fraction(1, 2), ScalarFunction.const(1))
    assert shifted_cocycle_residual(broken).first_order == 2
    assert qdybe_residual(DynamicalR.from_twist(broken, V)).is_zero()
