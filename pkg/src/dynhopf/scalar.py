"""Exact functions on the dual of the Cartan subalgebra.

A :class:`ScalarFunction` is a quotient ``N / D`` where ``N`` is an
exp-polynomial (finite sum of ``c * x^a * exp(v . x)`` with rational ``c``
and rational exponent vectors ``v``) and ``D`` is a product of normalized
exp-polynomial factors kept in factored form.  The class is closed under
+, -, *, /, integer powers and partial derivatives, and equality is decided
exactly: exp-polynomial monomials are linearly independent functions, so a
quotient vanishes iff its numerator is the zero exp-polynomial.

Variables are strings.  The coordinates are ``"l1" ... "lk"``; any other
identifier behaves as a formal constant (a named parameter).
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import cmp_to_key
from typing import Dict, Iterable, Mapping, Tuple

Key = Tuple[tuple, tuple]  # (poly part, exp part)
ONE_KEY: Key = ((), ())


def lam(i: int) -> str:
    """Name of the i-th coordinate (1-based)."""
    return f"l{i}"


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _merge(a: tuple, b: tuple, drop_zero: bool) -> tuple:
    # add two sparse sorted (name, value) tuples
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for n, v in b:
        w = d.get(n, 0) + v
        if w == 0 and drop_zero:
            d.pop(n, None)
        else:
            d[n] = w
    return tuple(sorted(d.items()))


def _key_mul(k1: Key, k2: Key) -> Key:
    return (_merge(k1[0], k2[0], True), _merge(k1[1], k2[1], True))


def _sparse_cmp(a: tuple, b: tuple) -> int:
    i = j = 0
    while i < len(a) or j < len(b):
        if j >= len(b) or (i < len(a) and a[i][0] < b[j][0]):
            return 1 if a[i][1] > 0 else -1
        if i >= len(a) or b[j][0] < a[i][0]:
            return -1 if b[j][1] > 0 else 1
        if a[i][1] != b[j][1]:
            return 1 if a[i][1] > b[j][1] else -1
        i += 1
        j += 1
    return 0


def key_cmp(k1: Key, k2: Key) -> int:
    """A total order on monomials compatible with multiplication."""
    c = _sparse_cmp(k1[1], k2[1])
    return c if c else _sparse_cmp(k1[0], k2[0])


_KEY = cmp_to_key(key_cmp)


class ExpPoly:
    """Finite sum of ``c * prod x^a * exp(sum v x)``; immutable by convention."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Key, Fraction] | None = None):
        self.terms: Dict[Key, Fraction] = {} if terms is None else dict(terms)
        self._hash = None

    @staticmethod
    def const(c) -> "ExpPoly":
        c = _q(c)
        return ExpPoly({ONE_KEY: c} if c else {})

    @staticmethod
    def monomial(key: Key, c=1) -> "ExpPoly":
        c = _q(c)
        return ExpPoly({key: c} if c else {})

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_KEY in self.terms)

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for k, c in other.terms.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return ExpPoly(t)

    def __neg__(self) -> "ExpPoly":
        return ExpPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "ExpPoly") -> "ExpPoly":
        return self + (-other)

    def scale(self, c) -> "ExpPoly":
        c = _q(c)
        if not c:
            return ExpPoly()
        return ExpPoly({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "ExpPoly") -> "ExpPoly":
        if not self.terms or not other.terms:
            return ExpPoly()
        if self.is_const():
            return other.scale(self.terms[ONE_KEY])
        if other.is_const():
            return self.scale(other.terms[ONE_KEY])
        t: Dict[Key, Fraction] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = _key_mul(k1, k2)
                v = t.get(k, 0) + c1 * c2
                if v:
                    t[k] = v
                else:
                    t.pop(k, None)
        return ExpPoly(t)

    def __pow__(self, n: int) -> "ExpPoly":
        out = ExpPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def diff(self, var: str) -> "ExpPoly":
        t: Dict[Key, Fraction] = {}
        for (poly, ex), c in self.terms.items():
            pd = dict(poly)
            ed = dict(ex)
            # exponential factor
            v = ed.get(var)
            if v:
                t[(poly, ex)] = t.get((poly, ex), 0) + c * v
            a = pd.get(var)
            if a:
                if a == 1:
                    del pd[var]
                else:
                    pd[var] = a - 1
                k = (tuple(sorted(pd.items())), ex)
                t[k] = t.get(k, 0) + c * a
        return ExpPoly({k: c for k, c in t.items() if c})

    def variables(self) -> set:
        out = set()
        for poly, ex in self.terms:
            out.update(n for n, _ in poly)
            out.update(n for n, _ in ex)
        return out

    def lead(self) -> Tuple[Key, Fraction]:
        k = max(self.terms, key=_KEY)
        return k, self.terms[k]

    def low(self) -> Key:
        return min(self.terms, key=_KEY)

    def evaluate(self, env: Mapping[str, float]) -> float:
        s = 0.0
        for (poly, ex), c in self.terms.items():
            v = float(c)
            for n, a in poly:
                v *= env[n] ** a
            if ex:
                v *= math.exp(sum(float(b) * env[n] for n, b in ex))
            s += v
        return s

    def canonical(self) -> tuple:
        return tuple(sorted(self.terms.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, ExpPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.canonical())
        return self._hash

    def divide(self, d: "ExpPoly", max_steps: int = 400):
        """Exact quotient ``self / d`` or None when not divisible."""
        if not self.terms:
            return ExpPoly()
        if d.is_const():
            return self.scale(1 / d.terms[ONE_KEY])
        dk, dc = d.lead()
        dlow = d.low()
        nlow = self.low()
        rem = self
        q: Dict[Key, Fraction] = {}
        steps = 0
        while rem.terms:
            steps += 1
            if steps > max_steps:
                return None
            rk, rc = rem.lead()
            qk = _key_div(rk, dk)
            if qk is None:
                return None
            # the lowest term of q*d would drop below that of self
            if key_cmp(_key_mul(qk, dlow), nlow) < 0:
                return None
            qc = rc / dc
            q[qk] = qc
            rem = rem - d * ExpPoly.monomial(qk, qc)
        return ExpPoly(q)


def _key_div(k1: Key, k2: Key):
    neg = (tuple((n, -a) for n, a in k2[0]), tuple((n, -b) for n, b in k2[1]))
    poly = _merge(k1[0], neg[0], True)
    if any(a < 0 for _, a in poly):
        return None
    return (poly, _merge(k1[1], neg[1], True))


def _unit_of(p: ExpPoly) -> Tuple[Fraction, tuple]:
    (poly, ex), c = p.lead()
    return c, ex


class PoleError(ZeroDivisionError):
    """Evaluation at (or too close to) a pole."""


class ScalarFunction:
    """Exact element of the rational-exponential function class."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: ExpPoly, den: Mapping[tuple, Tuple[ExpPoly, int]] | None = None,
                 _reduce: bool = True):
        self.num = num
        self.den: Dict[tuple, Tuple[ExpPoly, int]] = {} if den is None else dict(den)
        self._hash = None
        if num.is_zero():
            self.den = {}
        elif _reduce and self.den:
            self._cancel()

    # -- construction -------------------------------------------------
    @staticmethod
    def const(c) -> "ScalarFunction":
        return ScalarFunction(ExpPoly.const(c))

    @staticmethod
    def var(name: str) -> "ScalarFunction":
        return ScalarFunction(ExpPoly.monomial(((( name, 1),), ()), 1))

    @staticmethod
    def lam(i: int) -> "ScalarFunction":
        return ScalarFunction.var(lam(i))

    @staticmethod
    def exp(linform: Mapping[str, Fraction]) -> "ScalarFunction":
        ex = tuple(sorted((n, _q(v)) for n, v in linform.items() if v))
        return ScalarFunction(ExpPoly.monomial(((), ex), 1))

    @staticmethod
    def coth(linform: Mapping[str, Fraction]) -> "ScalarFunction":
        """coth(x) = (e^x + e^-x) / (e^x - e^-x)."""
        ep = ScalarFunction.exp(linform)
        em = ScalarFunction.exp({n: -_q(v) for n, v in linform.items()})
        return (ep + em) / (ep - em)

    @staticmethod
    def coerce(x) -> "ScalarFunction":
        if isinstance(x, ScalarFunction):
            return x
        if isinstance(x, (int, Fraction)):
            return ScalarFunction.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to ScalarFunction")

    # -- normalization --------------------------------------------------
    def _cancel(self) -> None:
        num = self.num
        den = dict(self.den)
        for fk in list(den):
            f, m = den[fk]
            while m:
                q = num.divide(f)
                if q is None:
                    break
                num = q
                m -= 1
            if m:
                den[fk] = (f, m)
            else:
                del den[fk]
        self.num = num
        self.den = den

    @staticmethod
    def _factor(p: ExpPoly) -> Tuple[ExpPoly, ExpPoly]:
        """Split p = unit * normalized; returns (unit^-1 as ExpPoly, normalized)."""
        c, ex = _unit_of(p)
        inv = ExpPoly.monomial(((), tuple((n, -b) for n, b in ex)), 1 / c)
        return inv, p * inv

    def den_poly(self) -> ExpPoly:
        out = ExpPoly.const(1)
        for f, m in self.den.values():
            out = out * (f ** m)
        return out

    # -- predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return not self.den and self.num.is_const()

    def const_value(self) -> Fraction:
        """Exact value if this is a constant function; raises otherwise."""
        if not self.den and self.num.is_const():
            return self.num.terms.get(ONE_KEY, Fraction(0))
        d = self.den_poly()
        _, nc = self.num.lead()
        _, dc = d.lead()
        c = nc / dc
        if self.num == d.scale(c):
            return c
        raise ValueError("not a constant function")

    def is_constant_function(self, variables: Iterable[str] | None = None) -> bool:
        vs = self.variables() if variables is None else variables
        return all(self.diff(v).is_zero() for v in vs)

    def variables(self) -> set:
        out = self.num.variables()
        for f, _ in self.den.values():
            out |= f.variables()
        return out

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> "ScalarFunction":
        if not isinstance(other, (int, Fraction, ScalarFunction)):
            return NotImplemented
        other = ScalarFunction.coerce(other)
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if not self.den and not other.den:
            return ScalarFunction(self.num + other.num)
        if self.den.keys() == other.den.keys() and all(
                self.den[k][1] == other.den[k][1] for k in self.den):
            return ScalarFunction(self.num + other.num, self.den)
        lcm = dict(self.den)
        for k, (f, m) in other.den.items():
            if k not in lcm or lcm[k][1] < m:
                lcm[k] = (f, m)
        n1 = self.num
        n2 = other.num
        for k, (f, m) in lcm.items():
            m1 = self.den.get(k, (f, 0))[1]
            m2 = other.den.get(k, (f, 0))[1]
            if m > m1:
                n1 = n1 * f ** (m - m1)
            if m > m2:
                n2 = n2 * f ** (m - m2)
        return ScalarFunction(n1 + n2, lcm)

    __radd__ = __add__

    def __neg__(self) -> "ScalarFunction":
        return ScalarFunction(-self.num, self.den, _reduce=False)

    def __sub__(self, other) -> "ScalarFunction":
        if not isinstance(other, (int, Fraction, ScalarFunction)):
            return NotImplemented
        return self + (-ScalarFunction.coerce(other))

    def __rsub__(self, other) -> "ScalarFunction":
        return ScalarFunction.coerce(other) - self

    def __mul__(self, other) -> "ScalarFunction":
        if not isinstance(other, (int, Fraction, ScalarFunction)):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = ScalarFunction.coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if not self.den and not other.den:
            return ScalarFunction(self.num * other.num)
        den = dict(self.den)
        for k, (f, m) in other.den.items():
            den[k] = (f, den.get(k, (f, 0))[1] + m)
        return ScalarFunction(self.num * other.num, den)

    __rmul__ = __mul__

    def scale(self, c) -> "ScalarFunction":
        c = _q(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return ScalarFunction(self.num.scale(c), self.den, _reduce=False)

    def inverse(self) -> "ScalarFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero function")
        inv, p = ScalarFunction._factor(self.num)
        num = inv * self.den_poly()
        den = {}
        if not p.is_const():
            den[p.canonical()] = (p, 1)
        return ScalarFunction(num, den)

    def __truediv__(self, other) -> "ScalarFunction":
        if not isinstance(other, (int, Fraction, ScalarFunction)):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / _q(other))
        return self * ScalarFunction.coerce(other).inverse()

    def __rtruediv__(self, other) -> "ScalarFunction":
        return ScalarFunction.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "ScalarFunction":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def diff(self, var: str) -> "ScalarFunction":
        if not self.den:
            return ScalarFunction(self.num.diff(var))
        # (N / prod f^p)' = (N' prod f - N sum p_j f_j' prod_{i!=j} f_i) / (prod f^p * prod f)
        fs = list(self.den.items())
        prod_f = ExpPoly.const(1)
        for _, (f, _) in fs:
            prod_f = prod_f * f
        top = self.num.diff(var) * prod_f
        for j, (_, (fj, pj)) in enumerate(fs):
            dfj = fj.diff(var)
            if dfj.is_zero():
                continue
            rest = ExpPoly.const(1)
            for i, (_, (fi, _)) in enumerate(fs):
                if i != j:
                    rest = rest * fi
            top = top - (self.num * dfj * rest).scale(pj)
        den = {k: (f, m + 1) for k, (f, m) in fs}
        return ScalarFunction(top, den)

    def diff_multi(self, index: Mapping[str, int]) -> "ScalarFunction":
        out = self
        for v, n in index.items():
            for _ in range(n):
                out = out.diff(v)
        return out

    # -- evaluation -----------------------------------------------------
    def evaluate(self, env: Mapping[str, float], pole_tol: float = 0.0) -> float:
        d = 1.0
        for f, m in self.den.values():
            fv = f.evaluate(env)
            if abs(fv) <= pole_tol or fv == 0.0:
                raise PoleError("denominator vanishes at sample point")
            d *= fv ** m
        return self.num.evaluate(env) / d

    # -- comparisons ----------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ScalarFunction.const(other)
        if not isinstance(other, ScalarFunction):
            return NotImplemented
        return (self - other).num.is_zero()

    def __hash__(self) -> int:
        # only constants and polynomials hash reliably; used for caches of
        # structurally identical values
        if self._hash is None:
            self._hash = hash((self.num, tuple(sorted((k, m) for k, (_, m) in self.den.items()))))
        return self._hash

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __repr__(self) -> str:
        return f"ScalarFunction({to_text(self)})"

    def __str__(self) -> str:
        return to_text(self)


def _mono_text(key: Key) -> str:
    poly, ex = key
    parts = []
    for n, a in poly:
        parts.append(n if a == 1 else f"{n}^{a}")
    if ex:
        lin = " + ".join(f"{b}*{n}" if b != 1 else n for n, b in ex)
        parts.append(f"exp({lin})")
    return "*".join(parts)


def poly_text(p: ExpPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for k, c in sorted(p.terms.items(), key=lambda kc: _KEY(kc[0]), reverse=True):
        m = _mono_text(k)
        if not m:
            out.append(str(c))
        elif c == 1:
            out.append(m)
        elif c == -1:
            out.append("-" + m)
        else:
            out.append(f"{c}*{m}")
    return " + ".join(out).replace("+ -", "- ")


def to_text(f: ScalarFunction) -> str:
    n = poly_text(f.num)
    if not f.den:
        return n
    ds = []
    for g, m in f.den.values():
        s = f"({poly_text(g)})"
        ds.append(s if m == 1 else f"{s}^{m}")
    return f"({n})/({'*'.join(ds)})"


ZERO = ScalarFunction(ExpPoly())
ONE = ScalarFunction.const(1)
