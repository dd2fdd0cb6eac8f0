"""Normal-form arithmetic in H = D(η*) ⊗ U(g) and its tensor powers over R.

A term of a :class:`TensorElement` is ``ℏ^n · c(λ) · m_1 ⊗ ... ⊗ m_k`` with
each ``m_t = ∂^I u`` (a multi-index of coordinate derivatives times a sorted
PBW word).  In H ⊗_R H the base algebra acts by left multiplication on every
factor (α = β), so ``c·x ⊗ y = x ⊗ c·y`` and the coefficient is a global
factor of the term.

Products are only well defined when the left factor is compatible with the
position of the right factor's coefficient (the Takeuchi condition of the
coproduct, for instance).  :func:`multiply` therefore takes ``coef_slot``:
the slot whose derivatives act on the right factor's coefficient.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .lie_core import LieAlgebra
from .scalar import ONE, ZERO, ScalarFunction, lam
from .series import HbarSeries

Mono = Tuple[Tuple[int, ...], Tuple[int, ...]]      # (∂ multi-index, PBW word)
Key = Tuple[int, Tuple[Mono, ...]]                  # (ℏ power, slot monomials)


class ArityMismatch(ValueError):
    pass


class NotUnital(ValueError):
    pass


class NotComposable(ValueError):
    pass


class CapExceeded(ArithmeticError):
    pass


@dataclass(frozen=True)
class TruncationConfig:
    hbar_order: int = 4
    diff_cap: int = 6
    pbw_cap: int = 6

    def __post_init__(self):
        if min(self.hbar_order, self.diff_cap, self.pbw_cap) < 0:
            raise ValueError("truncation caps must be non-negative")


class HopfModel:
    """H = D(η*) ⊗ U(g) with k coordinates and an optional deformed Δ₀ table.

    ``delta0`` maps a g-basis index to an arity-2 TensorElement (ℏ-series in
    U(g)⊗U(g)) replacing the primitive coproduct of that generator.
    """

    def __init__(self, g: LieAlgebra, k: Optional[int] = None, config: TruncationConfig = TruncationConfig(),
                 delta0: Optional[Mapping[int, "TensorElement"]] = None):
        self.g = g
        self.k = g.rank if k is None else k
        self.cfg = config
        self.zero_I = (0,) * self.k
        self.one_mono: Mono = (self.zero_I, ())
        self._pbw: Dict[tuple, Dict[tuple, Fraction]] = {}
        self._delta_word: Dict[tuple, "TensorElement"] = {}
        self.delta0 = dict(delta0) if delta0 else {}

    def with_config(self, config: TruncationConfig) -> "HopfModel":
        return HopfModel(self.g, self.k, config, self.delta0)

    @property
    def N(self) -> int:
        return self.cfg.hbar_order

    # -- U(g) -----------------------------------------------------------
    def straighten(self, word: tuple) -> Dict[tuple, Fraction]:
        """PBW normal form of an arbitrary word via xy = yx + [x, y]."""
        hit = self._pbw.get(word)
        if hit is not None:
            return hit
        out: Dict[tuple, Fraction] = {}
        for i in range(len(word) - 1):
            x, y = word[i], word[i + 1]
            if x > y:
                for w, c in self.straighten(word[:i] + (y, x) + word[i + 2:]).items():
                    out[w] = out.get(w, 0) + c
                for z, v in self.g.bracket_basis(x, y).items():
                    for w, c in self.straighten(word[:i] + (z,) + word[i + 2:]).items():
                        out[w] = out.get(w, 0) + v * c
                out = {w: c for w, c in out.items() if c}
                break
        else:
            out = {word: Fraction(1)}
        self._pbw[word] = out
        return out

    def pbw_mul(self, u: tuple, v: tuple) -> Dict[tuple, Fraction]:
        if not u:
            return {v: Fraction(1)}
        if not v:
            return {u: Fraction(1)}
        if u[-1] <= v[0]:
            return {u + v: Fraction(1)}
        return self.straighten(u + v)

    # -- elements -------------------------------------------------------
    def zero(self, arity: int = 1) -> "TensorElement":
        return TensorElement(self, arity)

    def one(self, arity: int = 1) -> "TensorElement":
        return TensorElement(self, arity, {(0, (self.one_mono,) * arity): ONE})

    def scalar(self, f, arity: int = 1) -> "TensorElement":
        return TensorElement(self, arity, {(0, (self.one_mono,) * arity): ScalarFunction.coerce(f)})

    def d(self, i: int) -> "TensorElement":
        """∂/∂λ_i (1-based) in H."""
        I = [0] * self.k
        I[i - 1] = 1
        return TensorElement(self, 1, {(0, ((tuple(I), ()),)): ONE})

    def x(self, idx) -> "TensorElement":
        """g-basis element (index or label) in H."""
        if not isinstance(idx, int):
            idx = self.g.index(idx)
        return TensorElement(self, 1, {(0, ((self.zero_I, (idx,)),)): ONE})

    def mono(self, I: Sequence[int], word: Sequence[int], coeff=1) -> "TensorElement":
        return TensorElement(self, 1, {(0, ((tuple(I), tuple(word)),)): ScalarFunction.coerce(coeff)})

    def hbar(self, n: int = 1, arity: int = 1) -> "TensorElement":
        return TensorElement(self, arity, {(n, (self.one_mono,) * arity): ONE})

    def tensor(self, *factors: "TensorElement") -> "TensorElement":
        """x_1 ⊗ ... ⊗ x_m of arity-1 elements (coefficients become global)."""
        out = {}
        N = self.N
        for combo in itertools.product(*(f.terms.items() for f in factors)):
            h = sum(k[0] for k, _ in combo)
            if h > N:
                continue
            c = ONE
            for _, v in combo:
                c = c * v
            key = (h, tuple(k[1][0] for k, _ in combo))
            out[key] = out.get(key, ZERO) + c
        return TensorElement(self, len(factors), out, any(f.overflow for f in factors))

    def normalize(self, raw: Iterable[Tuple[int, object, Sequence[Sequence[tuple]]]], arity: int) -> "TensorElement":
        """Normal form of Σ ℏ^n c · (slot products), each slot a list of factors.

        A factor is ``("d", i)`` (1-based coordinate), ``("x", index or label)``
        or ``("f", scalar)``, multiplied left to right inside its slot.
        """
        total = self.zero(arity)
        for n, c, slots in raw:
            if len(slots) != arity:
                raise ArityMismatch("slot count does not match arity")
            parts = []
            for slot in slots:
                e = self.one(1)
                for kind, val in slot:
                    if kind == "d":
                        f = self.d(val)
                    elif kind == "x":
                        f = self.x(val)
                    elif kind == "f":
                        f = self.scalar(val)
                    else:
                        raise ValueError(f"unknown factor kind {kind!r}")
                    e = multiply(e, f)
                parts.append(e)
            total = total + self.tensor(*parts).scale(c).shift(n)
        return total

    # -- coproduct --------------------------------------------------------
    def delta_gen(self, idx: int) -> "TensorElement":
        if idx in self.delta0:
            return self.delta0[idx]
        one = self.one_mono
        xm = (self.zero_I, (idx,))
        return TensorElement(self, 2, {(0, (xm, one)): ONE, (0, (one, xm)): ONE})

    def delta_word(self, word: tuple) -> "TensorElement":
        hit = self._delta_word.get(word)
        if hit is None:
            if not word:
                hit = self.one(2)
            else:
                hit = multiply(self.delta_word(word[:-1]), self.delta_gen(word[-1]))
            self._delta_word[word] = hit
        return hit

    def delta_mono(self, m: Mono) -> "TensorElement":
        I, w = m
        dw = self.delta_word(w)
        if not any(I):
            return dw
        out = {}
        ranges = [range(a + 1) for a in I]
        for J in itertools.product(*ranges):
            c = 1
            for a, b in zip(I, J):
                c *= comb(a, b)
            K = tuple(a - b for a, b in zip(I, J))
            for (h, (m1, m2)), v in dw.terms.items():
                key = (h, ((_add(J, m1[0]), m1[1]), (_add(K, m2[0]), m2[1])))
                out[key] = out.get(key, ZERO) + v.scale(c)
        return TensorElement(self, 2, out, dw.overflow)


def _add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class TensorElement:
    """ℏ-truncated normal-form element of H^{⊗_R k}."""

    __slots__ = ("model", "arity", "terms", "overflow")

    def __init__(self, model: HopfModel, arity: int, terms: Mapping[Key, object] | None = None,
                 overflow: bool = False):
        if not 1 <= arity <= 3:
            raise ArityMismatch("arity must be 1, 2 or 3")
        self.model = model
        self.arity = arity
        self.overflow = overflow
        N = model.N
        self.terms: Dict[Key, ScalarFunction] = {}
        for key, c in (terms or {}).items():
            if key[0] > N:
                continue
            c = ScalarFunction.coerce(c)
            if c:
                self.terms[key] = c

    def _check(self, other: "TensorElement"):
        if self.arity != other.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")
        if self.model is not other.model:
            raise ArityMismatch("elements of different models")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return TensorElement(self.model, self.arity, out, self.overflow or other.overflow)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.model, self.arity, {k: -c for k, c in self.terms.items()}, self.overflow)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        c = ScalarFunction.coerce(c)
        return TensorElement(self.model, self.arity, {k: v * c for k, v in self.terms.items()}, self.overflow)

    def shift(self, n: int) -> "TensorElement":
        """Multiply by ℏ^n."""
        if n == 0:
            return self
        return TensorElement(self.model, self.arity, {(h + n, m): c for (h, m), c in self.terms.items()},
                             self.overflow)

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        return multiply(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and (self - other).is_zero()

    def orders(self) -> List[int]:
        return sorted({h for h, _ in self.terms})

    def first_order(self) -> Optional[int]:
        """Lowest ℏ-power with a nonzero term (None for zero)."""
        return min((h for h, _ in self.terms), default=None)

    def hbar_part(self, n: int) -> "TensorElement":
        return TensorElement(self.model, self.arity, {(0, m): c for (h, m), c in self.terms.items() if h == n},
                             self.overflow)

    def truncate(self, n: int) -> "TensorElement":
        return TensorElement(self.model, self.arity, {k: c for k, c in self.terms.items() if k[0] <= n},
                             self.overflow)

    def max_diff_order(self) -> int:
        return max((sum(m[0]) for _, ms in self.terms for m in ms), default=0)

    def is_differential_free(self) -> bool:
        return all(not any(m[0]) for _, ms in self.terms for m in ms)

    def flip(self) -> "TensorElement":
        """Swap the two factors of an arity-2 element (coefficients are global)."""
        if self.arity != 2:
            raise ArityMismatch("flip needs arity 2")
        return TensorElement(self.model, 2, {(h, (m[1], m[0])): c for (h, m), c in self.terms.items()},
                             self.overflow)

    def permute(self, perm: Sequence[int]) -> "TensorElement":
        """Slot t of the result is slot perm[t] of self."""
        return TensorElement(self.model, self.arity,
                             {(h, tuple(m[p] for p in perm)): c for (h, m), c in self.terms.items()},
                             self.overflow)

    def embed(self, slots: Sequence[int], arity: int) -> "TensorElement":
        """Place the factors at positions ``slots`` of an arity-``arity`` element (1 elsewhere)."""
        one = self.model.one_mono
        out = {}
        for (h, ms), c in self.terms.items():
            full = [one] * arity
            for s, m in zip(slots, ms):
                full[s] = m
            out[(h, tuple(full))] = c
        return TensorElement(self.model, arity, out, self.overflow)

    def map_coeffs(self, fn: Callable[[ScalarFunction], ScalarFunction]) -> "TensorElement":
        return TensorElement(self.model, self.arity, {k: fn(c) for k, c in self.terms.items()}, self.overflow)

    def evaluate(self, point) -> Dict[Key, float]:
        from .sampling import env_of
        env = env_of(point)
        return {k: c.evaluate(env) for k, c in self.terms.items()}

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(self._term_text(k, c) for k, c in sorted(self.terms.items(), key=lambda kc: kc[0]))

    def _term_text(self, key: Key, c: ScalarFunction) -> str:
        h, ms = key
        labels = self.model.g.basis_labels
        slots = []
        for I, w in ms:
            parts = [f"d{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(I) if a]
            parts += [labels[x] for x in w]
            slots.append("*".join(parts) or "1")
        hb = "" if h == 0 else ("ħ*" if h == 1 else f"ħ^{h}*")
        return f"{hb}({c})*" + "⊗".join(slots)


def _multi_range(I: tuple):
    return itertools.product(*(range(a + 1) for a in I))


def multiply(a: TensorElement, b: TensorElement, coef_slot: int = 1) -> TensorElement:
    """Componentwise product; derivatives of slot ``coef_slot`` act on b's coefficients."""
    a._check(b)
    model = a.model
    N, D, P = model.N, model.cfg.diff_cap, model.cfg.pbw_cap
    s = coef_slot - 1
    if not 0 <= s < a.arity:
        raise ArityMismatch("coef_slot out of range")
    out: Dict[Key, ScalarFunction] = {}
    overflow = a.overflow or b.overflow
    names = [lam(i + 1) for i in range(model.k)]
    dcache: Dict[Tuple[Key, tuple], ScalarFunction] = {}
    for (ha, ma), fa in a.terms.items():
        for (hb, mb), fb in b.terms.items():
            h = ha + hb
            if h > N:
                continue
            fb_const = fb.is_const()
            per_slot = []
            for t in range(a.arity):
                (I, u), (J, v) = ma[t], mb[t]
                uv = model.pbw_mul(u, v)
                opts = []
                if t == s and not fb_const and any(I):
                    for K in _multi_range(I):
                        c = 1
                        for x, y in zip(I, K):
                            c *= comb(x, y)
                        nI = tuple(x - y + z for x, y, z in zip(I, K, J))
                        opts.append((c, K, nI))
                else:
                    opts.append((1, None, _add(I, J)))
                slot_terms = []
                for c, K, nI in opts:
                    if sum(nI) > D:
                        overflow = True
                        continue
                    for w, wc in uv.items():
                        if len(w) > P:
                            overflow = True
                            continue
                        slot_terms.append((c * wc, K, (nI, w)))
                per_slot.append(slot_terms)
            for combo in itertools.product(*per_slot):
                num = Fraction(1)
                K = None
                for c, Kt, _ in combo:
                    num *= c
                    if Kt is not None:
                        K = Kt
                if K is None or not any(K):
                    coef = fb
                else:
                    ck = ((hb, mb), K)
                    coef = dcache.get(ck)
                    if coef is None:
                        coef = fb
                        for i, n in enumerate(K):
                            for _ in range(n):
                                coef = coef.diff(names[i])
                        dcache[ck] = coef
                    if not coef:
                        continue
                key = (h, tuple(m for _, _, m in combo))
                val = (fa * coef).scale(num)
                out[key] = out[key] + val if key in out else val
    return TensorElement(model, a.arity, out, overflow)


# -- structure maps ----------------------------------------------------------

def coproduct(x: TensorElement) -> TensorElement:
    if x.arity != 1:
        raise ArityMismatch("coproduct needs arity 1")
    model = x.model
    acc: Dict[Key, ScalarFunction] = {}
    overflow = x.overflow
    N = model.N
    for (h, (m,)), c in x.terms.items():
        dm = model.delta_mono(m)
        overflow = overflow or dm.overflow
        for (h2, ms), v in dm.terms.items():
            if h + h2 > N:
                continue
            key = (h + h2, ms)
            val = c * v
            acc[key] = acc[key] + val if key in acc else val
    return TensorElement(model, 2, acc, overflow)


def apply_slot(x: TensorElement, slot: int, fn: Callable[[Mono], TensorElement]) -> TensorElement:
    """Replace factor ``slot`` (1-based) of every term by the element fn(monomial)."""
    model = x.model
    N = model.N
    acc: Dict[Key, ScalarFunction] = {}
    overflow = x.overflow
    new_arity = None
    s = slot - 1
    for (h, ms), c in x.terms.items():
        y = fn(ms[s])
        new_arity = x.arity - 1 + y.arity
        overflow = overflow or y.overflow
        for (h2, ys), v in y.terms.items():
            if h + h2 > N:
                continue
            key = (h + h2, ms[:s] + ys + ms[s + 1:])
            val = c * v
            acc[key] = acc[key] + val if key in acc else val
    if new_arity is None:
        probe = fn(model.one_mono)
        new_arity = x.arity - 1 + probe.arity
    return TensorElement(model, new_arity, acc, overflow)


def delta_slot(x: TensorElement, slot: int) -> TensorElement:
    """(id ⊗ .. Δ (at slot) .. ⊗ id) x."""
    return apply_slot(x, slot, x.model.delta_mono)


def counit_mono(model: HopfModel, m: Mono) -> int:
    return 1 if m == model.one_mono else 0


def counit(x: TensorElement) -> HbarSeries:
    """ε(c ∂^I u) = c if I = 0 and u = 1, else 0; returned as an ℏ-series."""
    if x.arity != 1:
        raise ArityMismatch("counit needs arity 1")
    out: Dict[int, ScalarFunction] = {}
    one = x.model.one_mono
    for (h, (m,)), c in x.terms.items():
        if m == one:
            out[h] = out.get(h, ZERO) + c
    return HbarSeries(out, x.model.N)


def counit_slot(x: TensorElement, slot: int) -> TensorElement:
    """Apply ε to factor ``slot`` (1-based), using R ⊗_R H ≅ H ≅ H ⊗_R R."""
    one = x.model.one_mono
    s = slot - 1
    out: Dict[Key, ScalarFunction] = {}
    for (h, ms), c in x.terms.items():
        if ms[s] == one:
            key = (h, ms[:s] + ms[s + 1:])
            out[key] = out[key] + c if key in out else c
    return TensorElement(x.model, x.arity - 1, out, x.overflow)


def mono_apply(model: HopfModel, m: Mono, f: ScalarFunction) -> ScalarFunction:
    I, w = m
    if w:
        return ZERO
    for i, n in enumerate(I):
        for _ in range(n):
            f = f.diff(lam(i + 1))
    return f


def anchor_apply(x: TensorElement, f) -> HbarSeries:
    """μ(x)(f): the representation of H on R (ε₀ on U(g), derivatives on D)."""
    if x.arity != 1:
        raise ArityMismatch("anchor needs arity 1")
    f = ScalarFunction.coerce(f)
    out: Dict[int, ScalarFunction] = {}
    for (h, (m,)), c in x.terms.items():
        v = mono_apply(x.model, m, f)
        if v:
            out[h] = out.get(h, ZERO) + c * v
    return HbarSeries(out, x.model.N)


def series_to_element(model: HopfModel, s: HbarSeries) -> TensorElement:
    """The ℏ-series of functions Σ ℏ^n f_n as an element α(f) of H."""
    one = model.one_mono
    return TensorElement(model, 1, {(n, (one,)): c for n, c in s.coeffs.items()})


def phi_maps(T: TensorElement, a) -> Tuple[TensorElement, TensorElement]:
    """(φα(T ⊗ a), φβ(T ⊗ a)) with φα(x⊗y⊗a) = x(a)·y and φβ(x⊗y⊗a) = y(a)·x."""
    if T.arity != 2:
        raise ArityMismatch("phi maps need arity 2")
    a = ScalarFunction.coerce(a)
    model = T.model
    pa: Dict[Key, ScalarFunction] = {}
    pb: Dict[Key, ScalarFunction] = {}
    for (h, (m1, m2)), c in T.terms.items():
        v = mono_apply(model, m1, a)
        if v:
            key = (h, (m2,))
            pa[key] = pa[key] + c * v if key in pa else c * v
        v = mono_apply(model, m2, a)
        if v:
            key = (h, (m1,))
            pb[key] = pb[key] + c * v if key in pb else c * v
    return TensorElement(model, 1, pa, T.overflow), TensorElement(model, 1, pb, T.overflow)


# -- twists -------------------------------------------------------------------

def cocycle_lhs(F: TensorElement) -> TensorElement:
    return multiply(delta_slot(F, 1), F.embed((0, 1), 3), coef_slot=1)


def cocycle_rhs(F: TensorElement) -> TensorElement:
    return multiply(delta_slot(F, 2), F.embed((1, 2), 3), coef_slot=2)


def cocycle_residual(F: TensorElement) -> TensorElement:
    """(Δ⊗id)F·F¹² - (id⊗Δ)F·F²³ mod ℏ^{N+1}."""
    if F.arity != 2:
        raise ArityMismatch("cocycle residual needs arity 2")
    return cocycle_lhs(F) - cocycle_rhs(F)


def counit_twist_residual(F: TensorElement) -> Tuple[TensorElement, TensorElement]:
    one = F.model.one(1)
    return counit_slot(F, 1) - one, counit_slot(F, 2) - one


def _check_unital(F: TensorElement):
    lead = F.hbar_part(0)
    if lead != F.model.one(F.arity):
        raise NotUnital("leading ℏ-term is not the identity")


def invert_series(F: TensorElement) -> TensorElement:
    """Geometric-series inverse of F = 1 + O(ℏ) mod ℏ^{N+1}."""
    _check_unital(F)
    one = F.model.one(F.arity)
    X = F - one
    out = one
    power = one
    for _ in range(F.model.N):
        power = multiply(power, -X)
        if power.is_zero():
            break
        out = out + power
    return out


def exp_series(X: TensorElement) -> TensorElement:
    """exp(X) for X = O(ℏ), truncated."""
    out = X.model.one(X.arity)
    power = out
    for n in range(1, X.model.N + 1):
        power = multiply(power, X).scale(Fraction(1, n))
        if power.is_zero():
            break
        out = out + power
    return out


class TwistedStructures:
    """α_F, β_F, the star product and Δ_F for a unital F."""

    def __init__(self, F: TensorElement):
        if F.arity != 2:
            raise ArityMismatch("a twist has arity 2")
        _check_unital(F)
        self.F = F
        self.model = F.model
        self._Finv: Optional[TensorElement] = None

    @property
    def F_inverse(self) -> TensorElement:
        if self._Finv is None:
            self._Finv = invert_series(self.F)
        return self._Finv

    def alpha(self, a) -> TensorElement:
        return phi_maps(self.F, a)[0]

    def beta(self, a) -> TensorElement:
        return phi_maps(self.F, a)[1]

    def star(self, a, b) -> HbarSeries:
        return anchor_apply(self.alpha(a), b)

    def star_series(self, a: HbarSeries, b: HbarSeries) -> HbarSeries:
        """Bilinear extension of the star product to ℏ-series of functions."""
        N = self.model.N
        out = HbarSeries({}, N)
        for n, fa in a.items():
            for m, fb in b.items():
                if n + m <= N:
                    out = out + _shift_series(self.star(fa, fb), n + m, N)
        return out

    def delta(self, x: TensorElement) -> TensorElement:
        """Δ_F(x) = F^{#-1}(Δ(x) F)."""
        return multiply(self.F_inverse, multiply(coproduct(x), self.F))


def _shift_series(s: HbarSeries, n: int, N: int) -> HbarSeries:
    return HbarSeries({k + n: c for k, c in s.coeffs.items()}, N)


def twisted_structures(F: TensorElement) -> TwistedStructures:
    return TwistedStructures(F)


def compose_twists(F1: TensorElement, F2: TensorElement) -> TensorElement:
    """F1·F2 = F1^#(F2), after checking the residuals that make it a twistor."""
    for name, F in (("F1", F1), ("F2", F2)):
        _check_unital(F)
        r1, r2 = counit_twist_residual(F)
        if not (r1.is_zero() and r2.is_zero()):
            raise NotComposable(f"{name} fails the counit condition")
    if not cocycle_residual(F1).is_zero():
        raise NotComposable("F1 fails the cocycle condition")
    F = multiply(F1, F2)
    if not cocycle_residual(F).is_zero():
        raise NotComposable("F2 fails the cocycle condition for the F1-twisted coproduct")
    return F


def moyal_twist(model: HopfModel, i: int = 1, j: int = 2, scale=1) -> TensorElement:
    """exp(ℏ c ∂_i ⊗ ∂_j)."""
    X = model.tensor(model.d(i), model.d(j)).scale(scale).shift(1)
    return exp_series(X)


# -- axiom checks on a model -------------------------------------------------

def lu_kernel_check(x: TensorElement, y: TensorElement, a) -> bool:
    """Δ(x)(a ⊗ 1 - 1 ⊗ a) = 0 in H ⊗_R H (compatibility of Δ with the base)."""
    m = x.model
    a = ScalarFunction.coerce(a)
    dx = coproduct(x)
    left = multiply(dx, m.scalar(a, 2), coef_slot=1)
    right = multiply(dx, m.scalar(a, 2), coef_slot=2)
    return (left - right).is_zero()


def factorial_frac(n: int) -> Fraction:
    return Fraction(1, factorial(n))
