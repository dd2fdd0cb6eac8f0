from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from dynhopf.expr import BinOp, Func, Neg, Num, ParseError, Pow, Var, parse, parse_scalar, pretty, scalar_text
from dynhopf.scalar import PoleError, ScalarFunction, lam

L1 = ScalarFunction.lam(1)
L2 = ScalarFunction.lam(2)


def test_parse_basic_forms():
    assert parse("λ1 + 2") == BinOp("+", Var(1), Num(Fraction(2)))
    assert parse("l2^-3") == Pow(Var(2), -3)
    assert parse("-exp(l1)") == Neg(Func("exp", Var(1)))
    assert parse("0.25*l1") == BinOp("*", Num(Fraction(1, 4)), Var(1))


@pytest.mark.parametrize("text,col", [("coth(", 5), ("1 +", 4), ("exp(l1*l1)", 4), ("l1 ^ 1.5", 6), ("2 $ 3", 3)])
def test_parse_errors_have_positions(text, col):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert e.value.line == 1 and e.value.col == col


def test_parse_error_line_numbers():
    with pytest.raises(ParseError) as e:
        parse("1 +\n  (l1")
    assert (e.value.line, e.value.col) == (2, 3)


def test_coth_desugars_to_exp_form():
    c = parse_scalar("coth(l1/2)")
    e = ScalarFunction.exp({lam(1): Fraction(1, 2)})
    em = ScalarFunction.exp({lam(1): Fraction(-1, 2)})
    assert c == (e + em) / (e - em)


def test_exact_identities():
    c = parse_scalar("coth(l1)")
    # coth' = 1 - coth^2
    assert c.diff(lam(1)) == ScalarFunction.const(1) - c * c
    assert (L1 / L1) == ScalarFunction.const(1)
    assert ((L1 + L2) ** 2 - L1 * L1 - L2 * L2) == L1 * L2 * ScalarFunction.const(2)


def test_constant_detection():
    c = parse_scalar("coth(l1)^2 - 1/(exp(l1) - exp(-l1))^2*4")
    assert c.is_constant_function([lam(1)])
    assert c.const_value() == 1


def test_pole_reporting():
    with pytest.raises(PoleError):
        parse_scalar("coth(l1)").evaluate({lam(1): 0.0})


def test_scalar_text_reparses():
    for text in ("coth(l1/2)*l2 - 3", "1/(l1 + 1)^2", "exp(2*l1 - l2)/l2"):
        f = parse_scalar(text)
        assert parse_scalar(scalar_text(f)) == f


# oracle: sympy differentiation of the same expression text
_SYMS = {"l1": sp.Symbol("l1"), "l2": sp.Symbol("l2")}


def _sympy(text):
    return sp.sympify(text.replace("^", "**").replace("λ", "l"), locals={**_SYMS, "coth": sp.coth, "exp": sp.exp})


@pytest.mark.parametrize("text", ["coth(l1/2)*l1^2", "1/(l1*l2 + 1)", "exp(l1 - 2*l2)*(l2 + 3)^-2",
                                  "coth(l1 + l2) - l1/l2"])
@pytest.mark.parametrize("var", ["l1", "l2"])
def test_diff_matches_sympy(text, var):
    f = parse_scalar(text)
    ref = sp.diff(_sympy(text), _SYMS[var])
    for pt in ((0.7, 1.3), (2.1, 0.4)):
        env = {"l1": pt[0], "l2": pt[1]}
        assert f.diff(var).evaluate(env) == pytest.approx(float(ref.subs(env)), rel=1e-10)


# -- generated expressions -------------------------------------------------

_nums = st.builds(lambda n, k: Num(Fraction(n, 10 ** k)), st.integers(0, 999), st.integers(0, 2))
_vars = st.builds(Var, st.integers(1, 3))
_lin = st.builds(lambda a, b: BinOp("*", a, b), _nums, _vars)


def _extend(children):
    return st.one_of(
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
        st.builds(Neg, children),
        st.builds(Pow, children, st.integers(-3, 3)),
        st.builds(Func, st.sampled_from(["exp", "coth"]), _lin),
    )


trees = st.recursive(st.one_of(_nums, _vars), _extend, max_leaves=8)


@given(trees)
def test_pretty_round_trip(tree):
    t1 = parse(pretty(tree))
    assert parse(pretty(t1)) == t1


@given(st.builds(lambda a, b, c: BinOp("+", BinOp("*", a, b), c), _nums, _vars, _vars))
def test_pretty_is_exact_on_parsed_trees(tree):
    assert parse(pretty(tree)) == tree


_fn_trees = st.recursive(st.one_of(_vars, st.builds(lambda n: Num(Fraction(n + 1, 4)), st.integers(0, 8))),
                         lambda ch: st.one_of(st.builds(BinOp, st.sampled_from("+-*"), ch, ch),
                                              st.builds(Func, st.just("exp"),
                                                        st.builds(lambda a: BinOp("*", Num(Fraction(1, 3)), a),
                                                                  _vars))),
                         max_leaves=6)


@given(_fn_trees, st.integers(1, 3))
def test_derivative_matches_finite_difference(tree, i):
    from dynhopf.expr import to_scalar
    f = to_scalar(tree)
    env = {"l1": 0.6, "l2": 1.1, "l3": 1.7}
    h = 1e-5
    up, dn = dict(env), dict(env)
    up[lam(i)] += h
    dn[lam(i)] -= h
    fd = (f.evaluate(up) - f.evaluate(dn)) / (2 * h)
    exact = f.diff(lam(i)).evaluate(env)
    assert exact == pytest.approx(fd, rel=1e-6, abs=1e-6)
