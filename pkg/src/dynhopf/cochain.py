"""The cobar-type complex on tensor powers of H and the Alt-of-2-cocycle test."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dyn_exterior import Multivector, ambient
from .hopf_kernel import ArityMismatch, TensorElement, coproduct, delta_slot
from .scalar import ZERO


class ArityCap(ArityMismatch):
    pass


def coface(i: int, x: TensorElement) -> TensorElement:
    """∂ⁱ: 1⊗x for i = 0, x⊗1 for i = n+1, Δ on factor i otherwise."""
    n = x.arity
    if n > 2:
        raise ArityCap("cofaces are implemented up to arity 2 -> 3")
    if not 0 <= i <= n + 1:
        raise ValueError(f"coface index {i} out of range for arity {n}")
    if i == 0:
        return x.embed(tuple(range(1, n + 1)), n + 1)
    if i == n + 1:
        return x.embed(tuple(range(n)), n + 1)
    return delta_slot(x, i)


def partial(x: TensorElement) -> TensorElement:
    """∂ = ∂⁰ - ∂¹ + ... ± ∂^{n+1}."""
    out = None
    for i in range(x.arity + 2):
        t = coface(i, x)
        if i % 2:
            t = -t
        out = t if out is None else out + t
    return out


def alt2(T: TensorElement) -> TensorElement:
    """T - T₂₁ (unnormalized)."""
    return T - T.flip()


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def alt3(T: TensorElement) -> TensorElement:
    """(1/3!) Σ sgn(σ) σ(T) on arity-3 elements."""
    if T.arity != 3:
        raise ArityMismatch("alt3 needs arity 3")
    out = T.model.zero(3)
    for p in itertools.permutations(range(3)):
        t = T.permute(p)
        out = out + (t if _perm_sign(p) > 0 else -t)
    return out.scale(Fraction(1, 6))


def generator_of(model, mono) -> Optional[int]:
    """Ambient generator index of a degree-one monomial (∂_i or a g-basis element)."""
    I, w = mono
    if not w and sum(I) == 1:
        return I.index(1)
    if not any(I) and len(w) == 1:
        return model.k + w[0]
    return None


def is_primitive(x: TensorElement) -> bool:
    m = x.model
    return coproduct(x) == m.tensor(x, m.one()) + m.tensor(m.one(), x)


def to_bivector(A: TensorElement) -> Optional[Multivector]:
    """Read an antisymmetric arity-2 element with degree-one legs as a section of ∧²A."""
    m = A.model
    amb = ambient(m.g, m.k)
    raw = []
    for (h, (m1, m2)), c in A.terms.items():
        a, b = generator_of(m, m1), generator_of(m, m2)
        if h or a is None or b is None:
            return None
        raw.append((c * Fraction(1, 2), (a, b)))
    mv = Multivector.from_raw(amb, raw)
    return mv


def from_bivector(m, mv: Multivector) -> TensorElement:
    """x∧y -> x⊗y - y⊗x in the model."""
    out = m.zero(2)
    for word, c in mv.terms.items():
        if len(word) != 2:
            raise ArityMismatch("expected a bivector")
        a, b = (gen_element(m, g) for g in word)
        out = out + (m.tensor(a, b) - m.tensor(b, a)).scale(c)
    return out


def gen_element(m, gen: int) -> TensorElement:
    return m.d(gen + 1) if gen < m.k else m.x(gen - m.k)


def to_vector(x: TensorElement) -> Optional[Multivector]:
    """Read an arity-1 element with degree-one terms as a section of A."""
    m = x.model
    amb = ambient(m.g, m.k)
    terms = {}
    for (h, (mono,)), c in x.terms.items():
        a = generator_of(m, mono)
        if h or a is None:
            return None
        terms[(a,)] = terms.get((a,), ZERO) + c
    return Multivector(amb, terms)


def from_vector(m, mv: Multivector) -> TensorElement:
    out = m.zero(1)
    for word, c in mv.terms.items():
        if len(word) == 0:
            out = out + m.scalar(c)
        elif len(word) == 1:
            out = out + gen_element(m, word[0]).scale(c)
        else:
            raise ArityMismatch("expected degree <= 1")
    return out


@dataclass
class AltResult:
    passed: bool
    residual: TensorElement
    alt: Optional[Multivector]
    legs_primitive: bool


def alt_two_cocycle(T: TensorElement) -> AltResult:
    """Check T⊗1 + (Δ⊗id)T = 1⊗T + (id⊗Δ)T and, if it holds, return Alt T ∈ Γ(∧²A)."""
    if T.arity != 2:
        raise ArityMismatch("alt_two_cocycle needs arity 2")
    res = partial(T)
    if not res.is_zero():
        return AltResult(False, res, None, False)
    A = alt2(T)
    mv = to_bivector(A)
    if mv is None:
        return AltResult(False, res, None, False)
    m = T.model
    legs = all(is_primitive(gen_element(m, g)) for w in mv.terms for g in w)
    return AltResult(legs, res, mv, legs)
