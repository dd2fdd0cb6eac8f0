from fractions import Fraction

import pytest

from dynhopf.classical_limit import (BadLeadingTerm, DeformationData, NotPrimitive, base_poisson,
                                     coboundary_agreement, delta_multivector, dynamical_corollary_check,
                                     extract_delta_f, extract_delta_X, limit_axiom_suite, twist_limit,
                                     twist_limit_report)
from dynhopf.dyn_exterior import Multivector, ambient, coboundary_d, prolong_lambda
from dynhopf.dyn_twist import build_theta, make_dynamical_twistor
from dynhopf.expr import parse_scalar
from dynhopf.hopf_kernel import HopfModel, NotUnital, TruncationConfig, moyal_twist, multiply
from dynhopf.library import antisymmetric_defect, rational_shifted_cocycle, sl2_model
from dynhopf.lie_core import build_sln
from dynhopf.scalar import ScalarFunction

L1 = ScalarFunction.lam(1)


@pytest.fixture(scope="module")
def m2():
    return sl2_model(N=2)


@pytest.fixture(scope="module")
def amb(m2):
    return ambient(m2.g, 1)


def gen(amb, m2, label):
    return Multivector.gen(amb, amb.lie_gen(m2.g.index(label)))


def test_theta_limit_on_functions(m2, amb):
    D = DeformationData.from_twist(build_theta(m2))
    assert extract_delta_f(D, L1) == gen(amb, m2, "h")
    f = parse_scalar("exp(l1) + l1^3")
    assert extract_delta_f(D, f) == gen(amb, m2, "h") * f.diff("l1")


def test_theta_limit_on_sections(m2, amb):
    D = DeformationData.from_twist(build_theta(m2))
    assert extract_delta_X(D, m2.x("h")).is_zero()
    L = twist_limit(build_theta(m2))
    assert L == prolong_lambda(Multivector(amb))
    for lab in ("e", "f"):
        assert extract_delta_X(D, m2.x(lab)) == coboundary_d(L, gen(amb, m2, lab))


def test_first_order_element_limit(m2, amb):
    # 1 + ℏ e⊗f is not a twist, but its ℏ¹ data already fixes δ
    e, f = m2.x("e"), m2.x("f")
    D = DeformationData.from_twist(m2.one(2) + m2.tensor(e, f).shift(1))
    from dynhopf.dyn_exterior import wedge
    assert extract_delta_X(D, e) == wedge(gen(amb, m2, "e"), gen(amb, m2, "h"))
    assert extract_delta_f(D, L1).is_zero()


def test_trivial_deformation(m2):
    D = DeformationData.trivial(m2)
    assert extract_delta_f(D, L1).is_zero()
    assert extract_delta_X(D, m2.x("e")).is_zero()
    assert base_poisson(D, L1, L1 * L1).is_zero()
    assert limit_axiom_suite(D).passed


def test_moyal_poisson():
    m = HopfModel(build_sln(3), 2, TruncationConfig(2, 4, 4))
    D = DeformationData.from_twist(moyal_twist(m))
    l1, l2 = ScalarFunction.lam(1), ScalarFunction.lam(2)
    assert base_poisson(D, l1, l2) == ScalarFunction.const(1)
    assert base_poisson(D, l2, l1) == ScalarFunction.const(-1)
    assert limit_axiom_suite(D).passed


@pytest.mark.parametrize("which", ["theta", "rational"])
def test_limit_suite_passes(m2, which):
    F = build_theta(m2) if which == "theta" else make_dynamical_twistor(rational_shifted_cocycle(m2))
    rep = limit_axiom_suite(DeformationData.from_twist(F))
    assert rep.passed, rep.failures


def test_alpha_defect_detected(m2):
    D = DeformationData.from_twist(build_theta(m2))
    broken = D.with_alpha_defect(lambda f: multiply(m2.x("e"), m2.scalar(f)))
    rep = limit_axiom_suite(broken)
    assert not rep.passed
    with pytest.raises(NotPrimitive):
        extract_delta_f(D.with_alpha_defect(lambda f: multiply(m2.x("e"), m2.x("f")).scale(f)), L1)


def test_bad_leading_term(m2):
    D = DeformationData.from_twist(build_theta(m2))
    with pytest.raises(BadLeadingTerm):
        extract_delta_f(D.with_alpha_defect(lambda f: m2.scalar(f).shift(-1)), L1)


def test_coboundary_agreement(m2):
    for F in (build_theta(m2), make_dynamical_twistor(rational_shifted_cocycle(m2))):
        assert all(v.is_zero() for v in coboundary_agreement(F).values())


def test_twist_limit_of_rational(m2, amb):
    F = make_dynamical_twistor(rational_shifted_cocycle(m2))
    L = twist_limit(F)
    r = Multivector.from_raw(amb, [(parse_scalar("-1/l1"), (amb.lie_gen(0), amb.lie_gen(1)))])
    # Alt(f⊗e/λ) = -(1/λ) e∧f, plus the Θ part
    assert L == prolong_lambda(r)
    rep = twist_limit_report(F, background=L)
    assert rep.cocycle_ok


def test_twist_limit_errors(m2):
    with pytest.raises(NotUnital):
        twist_limit(m2.one(2).scale(2))
    e, f = m2.x("e"), m2.x("f")
    with pytest.raises(BadLeadingTerm):
        twist_limit(m2.one(2) + m2.tensor(multiply(e, e), f).shift(1))


def test_delta_on_bivectors_squares_to_zero(m2, amb):
    D = DeformationData.from_twist(make_dynamical_twistor(rational_shifted_cocycle(m2)))
    for lab in ("e", "f", "h"):
        X = gen(amb, m2, lab) * L1
        assert delta_multivector(D, delta_multivector(D, X)).is_zero()


def test_corollary(m2):
    rep = dynamical_corollary_check(rational_shifted_cocycle(m2))
    assert rep.passed and rep.shifted_order is None
    assert rep.cdybe.classification == "triangular"
    broken = rational_shifted_cocycle(m2) + antisymmetric_defect(m2, Fraction(2), ScalarFunction.const(1))
    rep = dynamical_corollary_check(broken)
    assert rep.shifted_order == 2 and not rep.passed
