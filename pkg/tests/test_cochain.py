import random

import pytest
from hypothesis import given, strategies as st

from dynhopf.cli_io import random_element
from dynhopf.cochain import (ArityCap, alt2, alt3, alt_two_cocycle, coface, from_bivector, is_primitive, partial,
                             to_bivector)
from dynhopf.dyn_exterior import Multivector, ambient
from dynhopf.hopf_kernel import ArityMismatch, coproduct, multiply
from dynhopf.library import sl2_model
from dynhopf.scalar import ScalarFunction

L1 = ScalarFunction.lam(1)


@pytest.fixture(scope="module")
def m():
    return sl2_model(N=2)


def test_coface_examples(m):
    e, one = m.x("e"), m.one()
    assert coface(0, e) == m.tensor(one, e)
    assert coface(1, e) == coproduct(e)
    assert coface(2, e) == m.tensor(e, one)
    with pytest.raises(ValueError):
        coface(3, e)
    with pytest.raises(ArityCap):
        coface(1, m.one(3))


def test_partial_examples(m):
    for x in (m.x("e"), m.d(1), m.x("h").scale(L1)):
        assert partial(x).is_zero()
    f = L1 * L1
    assert partial(m.scalar(f)) == m.scalar(f, 2)
    ee = multiply(m.x("e"), m.x("e"))
    assert partial(ee) == m.tensor(m.x("e"), m.x("e")).scale(-2)


@given(st.integers(0, 10 ** 6))
def test_partial_squared(m, seed):
    x = random_element(m, random.Random(seed), 1)
    assert partial(partial(x)).is_zero()


def test_alt_helpers(m):
    e, f, h = m.x("e"), m.x("f"), m.x("h")
    assert alt2(m.tensor(e, f)) == m.tensor(e, f) - m.tensor(f, e)
    T = m.tensor(e, f, h)
    A = alt3(T)
    assert alt3(A) == A
    assert A.permute((1, 0, 2)) == -A
    with pytest.raises(ArityMismatch):
        alt3(m.tensor(e, f))


def test_primitive(m):
    assert is_primitive(m.x("e")) and is_primitive(m.d(1))
    assert not is_primitive(multiply(m.x("e"), m.x("f")))


# -- Alt of 2-cocycles ------------------------------------------------------------------

def _wedge_oracle(amb, x, y):
    """x∧y in the exterior algebra, built from generator words only."""
    if x == y:
        return Multivector(amb)
    return Multivector.from_raw(amb, [(ScalarFunction.const(1), (x, y))])


def _gen(m, g):
    return m.d(g + 1) if g < m.k else m.x(g - m.k)


def test_tensor_of_primitives(m):
    amb = ambient(m.g, m.k)
    for a in range(amb.ngens):
        for b in range(amb.ngens):
            res = alt_two_cocycle(m.tensor(_gen(m, a), _gen(m, b)))
            assert res.passed
            assert res.alt == _wedge_oracle(amb, a, b)


def test_coboundary_has_zero_alt(m):
    rng = random.Random(5)
    for _ in range(5):
        u = random_element(m, rng, 1, 2)
        res = alt_two_cocycle(partial(u))
        assert res.residual.is_zero()
        assert res.alt is not None and res.alt.is_zero()


def test_coproduct_is_not_a_cocycle(m):
    u = multiply(m.x("e"), m.x("f"))
    assert not alt_two_cocycle(coproduct(u)).passed


def test_non_primitive_leg_rejected(m):
    e, f, h = m.x("e"), m.x("f"), m.x("h")
    res = alt_two_cocycle(m.tensor(e, multiply(f, h)))
    assert not res.passed


def test_bivector_round_trip(m):
    amb = ambient(m.g, m.k)
    mv = Multivector.from_raw(amb, [(L1, (0, 2)), (ScalarFunction.const(3), (1, 3))])
    assert to_bivector(from_bivector(m, mv)) == mv


def test_alt_arity_check(m):
    with pytest.raises(ArityMismatch):
        alt_two_cocycle(m.one(1))
