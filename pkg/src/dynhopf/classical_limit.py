"""Classical limits of ℏ-deformations: δ on functions and sections, and checks.

Limits are exact coefficient extraction from truncated series.  A
:class:`DeformationData` only needs α_ℏ, β_ℏ, the base star product and
Δ_ℏ on sections; twists supply all four through :class:`TwistedStructures`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from .cochain import (alt2, alt_two_cocycle, from_vector, gen_element, is_primitive, to_bivector,
                      to_vector)
from .dyn_exterior import (CdybeReport, DynRMatrix, Multivector, ambient, cdybe_residual, coboundary_d,
                           hamiltonian_residual, schouten, wedge)
from .hopf_kernel import (HopfModel, NotUnital, TensorElement, TwistedStructures, coproduct, multiply)
from .scalar import ZERO, ScalarFunction, lam
from .series import HbarSeries


class NotPrimitive(ValueError):
    pass


class BadLeadingTerm(ValueError):
    pass


@dataclass
class DeformationData:
    model: HopfModel
    alpha: Callable[[ScalarFunction], TensorElement]
    beta: Callable[[ScalarFunction], TensorElement]
    star: Callable[[ScalarFunction, ScalarFunction], HbarSeries]
    delta: Callable[[TensorElement], TensorElement]
    provenance: str = "explicit"
    twist: Optional[TensorElement] = field(default=None, repr=False)
    excess: Optional[Callable[[TensorElement], TensorElement]] = field(default=None, repr=False)

    @staticmethod
    def from_twist(F: TensorElement) -> "DeformationData":
        tw = TwistedStructures(F)
        m = F.model

        def excess(x):
            # F^{#-1}(Δx·F - F·(1⊗x) - F·(x⊗1)); 1⊗x keeps x's coefficient in slot 2
            Z = multiply(coproduct(x), F) - multiply(F, m.tensor(m.one(), x), coef_slot=2) \
                - multiply(F, m.tensor(x, m.one()), coef_slot=1)
            return multiply(tw.F_inverse, Z)

        return DeformationData(m, tw.alpha, tw.beta, tw.star, tw.delta, "twist", F, excess)

    def delta_excess(self, x: TensorElement) -> TensorElement:
        """Δ_ℏx - (1⊗x + x⊗1) over the deformed base."""
        if self.excess is not None:
            return self.excess(x)
        m = self.model
        return self.delta(x) - m.tensor(x, m.one()) - m.tensor(m.one(), x)

    @staticmethod
    def trivial(model: HopfModel) -> "DeformationData":
        return DeformationData.from_twist(model.one(2))

    def with_alpha_defect(self, defect: Callable[[ScalarFunction], TensorElement]) -> "DeformationData":
        """Same data with α_ℏ f replaced by α_ℏ f + ℏ·defect(f)."""
        base = self.alpha
        return DeformationData(self.model, lambda f: base(f) + defect(f).shift(1), self.beta, self.star,
                               self.delta, self.provenance + "+alpha-defect", self.twist, self.excess)

    def leading_ok(self, f: ScalarFunction) -> bool:
        """α_ℏ f = β_ℏ f = f mod ℏ."""
        s = self.model.scalar(f)
        return self.alpha(f).hbar_part(0) == s and self.beta(f).hbar_part(0) == s


def _as_element(model: HopfModel, X) -> TensorElement:
    if isinstance(X, Multivector):
        return from_vector(model, X)
    return X


def delta_f_element(D: DeformationData, f) -> TensorElement:
    f = ScalarFunction.coerce(f)
    x = D.alpha(f) - D.beta(f)
    if not x.hbar_part(0).is_zero():
        raise BadLeadingTerm("α_ℏ f and β_ℏ f differ at order zero")
    return x.hbar_part(1)


def extract_delta_f(D: DeformationData, f) -> Multivector:
    """δf = ℏ¹-coefficient of α_ℏ f - β_ℏ f, as a section of A."""
    v = delta_f_element(D, f)
    if not is_primitive(v):
        raise NotPrimitive("δf is not primitive")
    mv = to_vector(v)
    if mv is None:
        raise NotPrimitive("δf has terms of differential/PBW degree other than one")
    return mv


def delta_one(D: DeformationData, X) -> TensorElement:
    """Δ¹X = ℏ¹-coefficient of Δ_ℏ X."""
    d = D.delta_excess(_as_element(D.model, X))
    if not d.hbar_part(0).is_zero():
        raise BadLeadingTerm("Δ_ℏ X does not reduce to X⊗1 + 1⊗X")
    return d.hbar_part(1)


def extract_delta_X(D: DeformationData, X) -> Multivector:
    """δX = Alt Δ¹X as a section of ∧²A."""
    A = alt2(delta_one(D, X))
    mv = to_bivector(A)
    if mv is None:
        raise BadLeadingTerm("Alt Δ¹X has legs outside Γ(A)")
    return mv


def delta_one_is_cocycle(D: DeformationData, X) -> bool:
    """The Alt-of-2-cocycle criterion applied to Δ¹X."""
    return alt_two_cocycle(delta_one(D, X)).passed


def base_poisson(D: DeformationData, f, g) -> ScalarFunction:
    """{f, g} = ℏ¹-coefficient of f *_ℏ g - g *_ℏ f."""
    f, g = ScalarFunction.coerce(f), ScalarFunction.coerce(g)
    s = D.star(f, g) - D.star(g, f)
    if s[0]:
        raise BadLeadingTerm("star commutator is nonzero at order zero")
    return ScalarFunction.coerce(s[1])


def delta_multivector(D: DeformationData, mv: Multivector) -> Multivector:
    """δ extended to degree ≤ 2 as a degree-one derivation of the wedge product."""
    amb = mv.amb
    m = D.model
    out = Multivector(amb)
    cache: Dict[int, Multivector] = {}

    def dgen(g):
        if g not in cache:
            cache[g] = extract_delta_X(D, gen_element(m, g))
        return cache[g]

    for word, c in mv.terms.items():
        dc = extract_delta_f(D, c) if not c.is_const() else Multivector(amb)
        gens = [Multivector.gen(amb, g) for g in word]
        if len(word) == 0:
            out = out + dc
        elif len(word) == 1:
            out = out + wedge(dc, gens[0]) + dgen(word[0]) * c
        elif len(word) == 2:
            a, b = gens
            out = out + wedge(wedge(dc, a), b) + (wedge(dgen(word[0]), b) - wedge(a, dgen(word[1]))) * c
        else:
            raise ValueError("δ is extended only up to degree 2")
    return out


def _rho(mv: Multivector, g: ScalarFunction) -> ScalarFunction:
    out = ZERO
    for (x,), c in mv.terms.items():
        out = out + c * mv.amb.anchor(x, g)
    return out


@dataclass
class LimitReport:
    residuals: Dict[str, object]
    errors: Dict[str, str]

    @property
    def failures(self) -> List[str]:
        out = [k for k, v in self.residuals.items() if not _is_zero(v)]
        return sorted(out + list(self.errors))

    @property
    def passed(self) -> bool:
        return not self.failures


def _is_zero(v) -> bool:
    if isinstance(v, bool):
        return v
    z = getattr(v, "is_zero", None)
    return z() if callable(z) else not v


def default_functions(k: int) -> List[ScalarFunction]:
    ls = [ScalarFunction.lam(i + 1) for i in range(k)]
    out = list(ls)
    out.append(ls[0] * ls[0] + ls[-1].scale(3))
    out.append(ScalarFunction.exp({lam(1): Fraction(1)}))
    return out


def limit_axiom_suite(D: DeformationData, functions: Optional[Sequence] = None,
                      sections: Optional[Sequence[Multivector]] = None) -> LimitReport:
    """Residuals of the classical-limit identities on sample functions and sections."""
    m = D.model
    amb = ambient(m.g, m.k)
    fs = [ScalarFunction.coerce(f) for f in (functions or default_functions(m.k))]
    if sections is None:
        sections = [Multivector.gen(amb, a) for a in range(amb.ngens)]
        sections.append(Multivector.gen(amb, amb.ngens - 1, fs[0]))
    res: Dict[str, object] = {}
    errs: Dict[str, str] = {}

    def guard(name, fn):
        try:
            res[name] = fn()
        except (NotPrimitive, BadLeadingTerm) as exc:
            errs[name] = str(exc)

    for i, f in enumerate(fs):
        guard(f"delta_f_section[{i}]", lambda: extract_delta_f(D, f) and True)
        guard(f"delta2_f[{i}]", lambda: delta_multivector(D, extract_delta_f(D, f)))
        for j, g in enumerate(fs):
            if j <= i:
                continue
            guard(f"delta_fg[{i},{j}]", lambda: extract_delta_f(D, f * g) - extract_delta_f(D, g) * f
                  - extract_delta_f(D, f) * g)
            guard(f"poisson[{i},{j}]", lambda: _rho(extract_delta_f(D, f), g) - base_poisson(D, f, g))
    for a, X in enumerate(sections):
        guard(f"delta_X_section[{a}]", lambda: delta_one_is_cocycle(D, X))
        guard(f"delta2_X[{a}]", lambda: delta_multivector(D, delta_multivector(D, X)))
        for i, f in enumerate(fs[:2]):
            guard(f"delta_fX[{i},{a}]", lambda: extract_delta_X(D, X * f) - extract_delta_X(D, X) * f
                  - wedge(extract_delta_f(D, f), X))
        for b, Y in enumerate(sections):
            if b <= a:
                continue
            guard(f"bialgebroid[{a},{b}]", lambda: delta_multivector(D, schouten(X, Y))
                  - schouten(delta_multivector(D, X), Y) - schouten(X, delta_multivector(D, Y)))
    return LimitReport(res, errs)


def lambda_bar(F: TensorElement) -> TensorElement:
    if F.hbar_part(0) != F.model.one(2):
        raise NotUnital("twist does not start with 1⊗1")
    return F.hbar_part(1)


def twist_limit(F: TensorElement) -> Multivector:
    """Λ = Alt(ℏ¹-coefficient of ℱ) as a section of ∧²A."""
    mv = to_bivector(alt2(lambda_bar(F)))
    if mv is None:
        raise BadLeadingTerm("Alt Λ̄ has legs outside Γ(A)")
    return mv


@dataclass
class TwistLimitReport:
    Lambda: Multivector
    cocycle_ok: bool
    hamiltonian: Optional[Multivector]

    @property
    def passed(self) -> bool:
        return self.cocycle_ok and (self.hamiltonian is None or self.hamiltonian.is_zero())


def twist_limit_report(F: TensorElement, background: Optional[Multivector] = None) -> TwistLimitReport:
    """Λ plus the Alt-of-2-cocycle criterion on Λ̄ and, given Λ₀, the Hamiltonian residual."""
    L = twist_limit(F)
    ok = alt_two_cocycle(lambda_bar(F)).passed
    ham = None
    if background is not None:
        ham = hamiltonian_residual(background, L)
    return TwistLimitReport(L, ok, ham)


def coboundary_agreement(F: TensorElement, functions=None, sections=None) -> Dict[str, Multivector]:
    """extract_delta_* minus coboundary_d(twist_limit(ℱ), ·) on samples (all zero expected)."""
    D = DeformationData.from_twist(F)
    L = twist_limit(F)
    amb = L.amb
    m = F.model
    fs = [ScalarFunction.coerce(f) for f in (functions or default_functions(m.k))]
    Xs = sections or [Multivector.gen(amb, a) for a in range(amb.ngens)]
    out = {}
    for i, f in enumerate(fs):
        out[f"f[{i}]"] = extract_delta_f(D, f) - coboundary_d(L, Multivector.function(amb, f))
    for a, X in enumerate(Xs):
        out[f"X[{a}]"] = extract_delta_X(D, X) - coboundary_d(L, X)
    return out


@dataclass
class CorollaryReport:
    r: Multivector
    cdybe: CdybeReport
    shifted_order: Optional[int]

    @property
    def passed(self) -> bool:
        return self.cdybe.passed


def dynamical_corollary_check(F: TensorElement, r0: Optional[TensorElement] = None, seed: int = 0) -> CorollaryReport:
    """r(λ) = Alt(½ r0 + f) for F = 1 + ℏf + ..., run through the CDYBE checker."""
    from .dyn_twist import shifted_cocycle_residual
    f = lambda_bar(F)
    T = f if r0 is None else f + r0.scale(Fraction(1, 2))
    r = to_bivector(alt2(T))
    if r is None:
        raise BadLeadingTerm("Alt(½r0 + f) has legs outside g")
    rep = cdybe_residual(DynRMatrix.of(r), seed=seed)
    order = shifted_cocycle_residual(F).first_order
    return CorollaryReport(r, rep, order)
