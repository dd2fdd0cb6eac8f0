"""Multivector fields on A = T(eta*) x g and their Schouten calculus.

Generators are numbered ``0 .. k-1`` for the coordinate fields d/dλ_i and
``k .. k+dim-1`` for the basis of g, so every ``∂`` precedes every g-element
in a canonical wedge word.  Coefficients are :class:`ScalarFunction`.

Sign convention (Koszul): ``[X, f] = ρ(X) f`` for X of degree 1,
graded antisymmetry ``[a, b] = -(-1)^{(|a|-1)(|b|-1)} [b, a]`` and
``[a, b∧c] = [a, b]∧c + (-1)^{(|a|-1)|b|} b∧[a, c]``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .lie_core import (LieAlgebra, MissingRootData, cartan_killing, invariance_residual,
                       invert_matrix, wedge_sort)
from .sampling import env_of, sample_points
from .scalar import ZERO, PoleError, ScalarFunction, lam


class AmbientMismatch(ValueError):
    pass


class DegreeError(ValueError):
    pass


class SingularSample(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Ambient:
    g: LieAlgebra
    k: int

    @property
    def ngens(self) -> int:
        return self.k + self.g.dim

    def label(self, gen: int) -> str:
        return f"d{gen + 1}" if gen < self.k else self.g.basis_labels[gen - self.k]

    def lie_gen(self, idx: int) -> int:
        return self.k + idx

    def anchor(self, gen: int, f: ScalarFunction) -> ScalarFunction:
        return f.diff(lam(gen + 1)) if gen < self.k else ZERO

    def gen_bracket(self, a: int, b: int) -> Dict[int, Fraction]:
        if a < self.k or b < self.k:
            return {}
        return {self.k + c: v for c, v in self.g.bracket_basis(a - self.k, b - self.k).items()}

    def cartan_gens(self) -> List[int]:
        return [self.k + i for i in self.g.cartan_indices]


_AMBIENTS: Dict[Tuple[int, int], Ambient] = {}


def ambient(g: LieAlgebra, k: Optional[int] = None) -> Ambient:
    """Shared Ambient for (g, k); k defaults to the rank of g."""
    k = g.rank if k is None else k
    key = (id(g), k)
    amb = _AMBIENTS.get(key)
    if amb is None or amb.g is not g:
        amb = _AMBIENTS[key] = Ambient(g, k)
    return amb


class Multivector:
    """Section of ∧*A: sparse map from strictly increasing words to coefficients."""

    __slots__ = ("amb", "terms")

    def __init__(self, amb: Ambient, terms: Mapping[tuple, object] | None = None):
        self.amb = amb
        self.terms: Dict[tuple, ScalarFunction] = {}
        for w, c in (terms or {}).items():
            c = ScalarFunction.coerce(c)
            if c:
                self.terms[tuple(w)] = c

    @staticmethod
    def from_raw(amb: Ambient, raw: Iterable[Tuple[object, Sequence[int]]]) -> "Multivector":
        """Sum of coefficient * (unsorted wedge word)."""
        acc: Dict[tuple, ScalarFunction] = {}
        for c, word in raw:
            s, w = wedge_sort(word)
            if not s:
                continue
            c = ScalarFunction.coerce(c)
            acc[w] = acc.get(w, ZERO) + (c if s > 0 else -c)
        return Multivector(amb, acc)

    @staticmethod
    def function(amb: Ambient, f) -> "Multivector":
        return Multivector(amb, {(): f})

    @staticmethod
    def gen(amb: Ambient, g: int, coeff=1) -> "Multivector":
        return Multivector(amb, {(g,): coeff})

    def degrees(self) -> set:
        return {len(w) for w in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise DegreeError(f"inhomogeneous multivector with degrees {sorted(ds)}")
        return ds.pop() if ds else 0

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Multivector"):
        if self.amb is not other.amb:
            raise AmbientMismatch("multivectors live over different ambients")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return Multivector(self.amb, out)

    def __neg__(self) -> "Multivector":
        return Multivector(self.amb, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __mul__(self, c) -> "Multivector":
        c = ScalarFunction.coerce(c)
        return Multivector(self.amb, {w: v * c for w, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        return isinstance(other, Multivector) and (self - other).is_zero()

    def __xor__(self, other: "Multivector") -> "Multivector":
        return wedge(self, other)

    def map_coeffs(self, fn) -> "Multivector":
        return Multivector(self.amb, {w: fn(c) for w, c in self.terms.items()})

    def diff(self, i: int) -> "Multivector":
        """Coefficientwise d/dλ_i (1-based)."""
        return self.map_coeffs(lambda c: c.diff(lam(i)))

    def has_d(self) -> bool:
        return any(x < self.amb.k for w in self.terms for x in w)

    def g_part(self) -> "Multivector":
        return Multivector(self.amb, {w: c for w, c in self.terms.items()
                                      if all(x >= self.amb.k for x in w)})

    def evaluate(self, point: Sequence[Fraction], pole_tol: float = 0.0) -> Dict[tuple, float]:
        env = env_of(point)
        return {w: c.evaluate(env, pole_tol) for w, c in self.terms.items()}

    def norm_at(self, point, pole_tol: float = 0.0) -> float:
        return max((abs(v) for v in self.evaluate(point, pole_tol).values()), default=0.0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            word = "∧".join(self.amb.label(x) for x in w) or "1"
            parts.append(f"({c})*{word}")
        return " + ".join(parts)


def wedge(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    raw = []
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            raw.append((c1 * c2, w1 + w2))
    return Multivector.from_raw(a.amb, raw)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def _bracket_terms(amb: Ambient, f: ScalarFunction, X: tuple, g: ScalarFunction, Y: tuple, raw: list):
    """Append the terms of [f X, g Y] (X, Y generator words) to ``raw``."""
    p = len(X)
    # [fX, g] ∧ Y, with [fX, g] = (-1)^p [g, fX] and [g, fX] = -f Σ (-1)^i ρ(x_i)g X̂_i
    if p:
        for i, x in enumerate(X):
            rg = amb.anchor(x, g)
            if rg:
                c = f * rg
                s = _sign(p) * -1 * _sign(i)
                raw.append((c if s > 0 else -c, X[:i] + X[i + 1:] + Y))
    # g Σ_j (-1)^{(p-1) j} y_<j ∧ [fX, y_j] ∧ y_>j, where
    # [fX, y] = -(ρ(y)f X + f Σ_i x_<i [y, x_i] x_>i)
    for j, y in enumerate(Y):
        s = _sign((p - 1) * j) * -1
        pre, post = Y[:j], Y[j + 1:]
        rf = amb.anchor(y, f)
        if rf:
            c = g * rf
            raw.append((c if s > 0 else -c, pre + X + post))
        for i, x in enumerate(X):
            for z, v in amb.gen_bracket(y, x).items():
                c = (f * g).scale(v)
                raw.append((c if s > 0 else -c, pre + X[:i] + (z,) + X[i + 1:] + post))


def schouten(a: Multivector, b: Multivector) -> Multivector:
    a._check(b)
    raw: list = []
    for X, f in a.terms.items():
        for Y, g in b.terms.items():
            _bracket_terms(a.amb, f, X, g, Y, raw)
    return Multivector.from_raw(a.amb, raw)


def coboundary_d(lam_: Multivector, v: Multivector) -> Multivector:
    """d_* V = -[Λ, V]; equals [V, Λ] on sections of A (degree 1)."""
    if lam_.terms and lam_.degree != 2:
        raise DegreeError("Λ must have degree 2")
    return -schouten(lam_, v)


# -- dynamical r-matrices ---------------------------------------------------

class DynRMatrix(Multivector):
    """Degree-2 multivector with no ∂-generators."""

    def __init__(self, amb: Ambient, terms: Mapping[tuple, object] | None = None):
        super().__init__(amb, terms)
        if self.has_d():
            raise DegreeError("a dynamical r-matrix has no d/dλ components")
        if self.terms and self.degree != 2:
            raise DegreeError("a dynamical r-matrix has degree 2")

    @staticmethod
    def of(mv: Multivector) -> "DynRMatrix":
        return DynRMatrix(mv.amb, mv.terms)


def zero_weight_residual(r: Multivector) -> List[Multivector]:
    """[ad_h r for h in the Cartan basis]."""
    amb = r.amb
    return [schouten(Multivector.gen(amb, h), r) for h in amb.cartan_gens()]


def alt_dr(r: Multivector) -> Multivector:
    """Σ_i h_i ∧ ∂r/∂λ_i."""
    amb = r.amb
    out = Multivector(amb)
    for i, h in enumerate(amb.cartan_gens()[:amb.k]):
        out = out + wedge(Multivector.gen(amb, h), r.diff(i + 1))
    return out


@dataclass
class CdybeReport:
    residual: Multivector
    exact_constant: bool
    constant: Optional[Dict[tuple, Fraction]]
    invariance: Optional[List[dict]]
    invariant: Optional[bool]
    spread: float
    samples: List[List[Fraction]] = field(repr=False)
    classification: str = ""

    @property
    def passed(self) -> bool:
        return self.classification in ("triangular", "dynamical")


def coefficient_denominators(mv: Multivector) -> List[ScalarFunction]:
    return [c for c in mv.terms.values() if c.den]


def cdybe_residual(r: Multivector, nsamples: int = 7, seed: int = 0, tol: float = 1e-9,
                   pole_tol: float = 1e-6) -> CdybeReport:
    """Alt(dr) - ½[r, r] with constancy and invariance verdicts."""
    r = DynRMatrix.of(r)
    amb = r.amb
    if any(not z.is_zero() for z in zero_weight_residual(r)):
        warnings.warn("r is not of zero weight", stacklevel=2)
    res = alt_dr(r) - schouten(r, r) * Fraction(1, 2)
    try:
        pts = sample_points(amb.k, nsamples, seed, avoid=list(r.terms.values()) + list(res.terms.values()),
                            pole_tol=pole_tol)
    except PoleError as e:
        raise SingularSample(str(e)) from None
    vals = [res.evaluate(p) for p in pts]
    spread = 0.0
    for w in res.terms:
        col = [v[w] for v in vals]
        scale = max(1.0, max(abs(x) for x in col))
        spread = max(spread, (max(col) - min(col)) / scale)
    exact = all(c.is_constant_function([lam(i + 1) for i in range(amb.k)]) for c in res.terms.values())
    const = inv = invariant = None
    if exact:
        const = {w: c.const_value() for w, c in res.terms.items()}
        gk = amb.k
        T = {tuple(x - gk for x in w): c for w, c in const.items()}
        inv = invariance_residual(amb.g, T, wedge=True)
        invariant = all(not d for d in inv)
    if res.is_zero():
        cls = "triangular"
    elif exact and invariant:
        cls = "dynamical"
    elif not exact and spread < tol:
        # numerically constant but not proven; still classify by the samples
        cls = "dynamical"
    else:
        cls = "neither"
    return CdybeReport(res, exact, const, inv, invariant, spread, pts, cls)


def killing_pairing(g: LieAlgebra, form: str = "killing"):
    """Matrix B^{-1} on η* for the chosen invariant form restricted to η."""
    K = cartan_killing(g)
    if form == "trace":
        n = _sl_rank(g)
        K = [[v / (2 * n) for v in row] for row in K]
    elif form != "killing":
        raise ValueError(f"unknown form {form!r}")
    return K, invert_matrix(K)


def _sl_rank(g: LieAlgebra) -> int:
    n = round((g.dim + 1) ** 0.5)
    if n * n - 1 != g.dim:
        raise ValueError("the trace form is only defined here for sl_n")
    return n


def form_value(g: LieAlgebra, i: int, j: int, form: str = "killing") -> Fraction:
    K = g.killing_matrix()[i][j]
    if form == "trace":
        K = K / (2 * _sl_rank(g))
    return K


def root_pairing(g: LieAlgebra, alpha: Sequence[Fraction], form: str = "killing") -> Dict[str, Fraction]:
    """Linear form λ -> <<α, λ>> in the coordinates λ_i dual to the Cartan basis."""
    _, Kinv = killing_pairing(g, form)
    n = len(alpha)
    return {lam(j + 1): sum((alpha[i] * Kinv[i][j] for i in range(n)), Fraction(0)) for j in range(n)}


def coth_r(g: LieAlgebra, form: str = "killing", normalize: bool = True, k: Optional[int] = None) -> DynRMatrix:
    """r(λ) = -½ Σ_{α>0} coth(½<<α,λ>>) E_α∧E_-α / <<E_α, E_-α>>.

    With ``normalize=False`` the division by <<E_α, E_-α>> is skipped (matrix
    units taken literally); that variant is not a dynamical r-matrix unless the
    root vectors are already dual for the form.
    """
    if not g.root_data:
        raise MissingRootData("coth_r needs root data")
    amb = ambient(g, k)
    raw = []
    for root in g.root_data:
        lf = {n: v / 2 for n, v in root_pairing(g, root.alpha, form).items()}
        c = ScalarFunction.coth(lf) * Fraction(-1, 2)
        if normalize:
            c = c / form_value(g, root.pos, root.neg, form)
        raw.append((c, (amb.lie_gen(root.pos), amb.lie_gen(root.neg))))
    return DynRMatrix.of(Multivector.from_raw(amb, raw))


def prolong_lambda(r: Multivector, eta_basis: Optional[Sequence[Sequence[Fraction]]] = None) -> Multivector:
    """Λ = Σ ∂/∂λ_i ∧ h_i + r.

    ``eta_basis`` optionally gives another basis h'_i = Σ_j M_ij h_j of η;
    the coordinate fields are then ∂/∂λ'_i = Σ_j (M^-1)_ji ∂/∂λ_j.
    """
    amb = r.amb
    hs = amb.cartan_gens()[:amb.k]
    k = len(hs)
    if eta_basis is None:
        M = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    else:
        M = [[Fraction(v) for v in row] for row in eta_basis]
    Minv = invert_matrix(M)
    raw = []
    for i in range(k):
        for j in range(k):
            for l in range(k):
                c = Minv[j][i] * M[i][l]
                if c:
                    raw.append((c, (j, hs[l])))
    return Multivector.from_raw(amb, raw) + r


def r_matroid_residual(L: Multivector):
    """([Λ,Λ], [[X, [Λ,Λ]] for every generator X])."""
    if L.terms and L.degree != 2:
        raise DegreeError("Λ must have degree 2")
    LL = schouten(L, L)
    return LL, [schouten(Multivector.gen(L.amb, x), LL) for x in range(L.amb.ngens)]


def hamiltonian_residual(L: Multivector, H: Multivector) -> Multivector:
    """[H, Λ] + ½[H, H]; zero iff Λ + H has the same [·,·]-square as Λ."""
    if H.terms and H.degree != 2:
        raise DegreeError("H must have degree 2")
    return schouten(H, L) + schouten(H, H) * Fraction(1, 2)


def calibration(r: Multivector) -> Optional[Fraction]:
    """c with g-part of ½[Λ,Λ] = c * cdybe(r), Λ = prolong_lambda(r); None if undetermined."""
    res = alt_dr(r) - schouten(r, r) * Fraction(1, 2)
    L = prolong_lambda(r)
    half = (schouten(L, L) * Fraction(1, 2)).g_part()
    if res.is_zero():
        return None
    w, c = next(iter(res.terms.items()))
    ratio = half.terms.get(w, ZERO) / c
    if half == res * ratio:
        try:
            return ratio.const_value()
        except ValueError:
            return None
    return None


@dataclass
class BaseReport:
    poisson: Dict[Tuple[int, int], ScalarFunction]
    bracket: ScalarFunction
    one_form_residual: float
    jacobi_residual: Optional[float]


def poisson_bracket(L: Multivector, f: ScalarFunction, g: ScalarFunction) -> ScalarFunction:
    """{f, g} = ρ(d_* f)(g)."""
    amb = L.amb
    df = coboundary_d(L, Multivector.function(amb, f))
    out = ZERO
    for (x,), c in df.terms.items():
        out = out + c * amb.anchor(x, g)
    return out


def base_structures(L: Multivector, f: ScalarFunction, g: ScalarFunction, points=None,
                    h: Optional[ScalarFunction] = None, seed: int = 0) -> BaseReport:
    """Induced Poisson bracket on η*, one-form bracket and Jacobi checks at samples."""
    amb = L.amb
    k = amb.k
    xs = [ScalarFunction.lam(i + 1) for i in range(k)]
    P = {(i, j): poisson_bracket(L, xs[i], xs[j]) for i in range(k) for j in range(k)}
    fg = poisson_bracket(L, f, g)
    if points is None:
        points = sample_points(k, 5, seed, avoid=[c for c in P.values() if c.den])
    # [df, dg]_π = L_{π#df} dg - L_{π#dg} df - d π(df, dg), componentwise
    df = [f.diff(lam(i + 1)) for i in range(k)]
    dg = [g.diff(lam(i + 1)) for i in range(k)]

    def sharp(a):
        return [sum((P[(i, j)] * a[i] for i in range(k)), ZERO) for j in range(k)]

    def lie_deriv(V, b):
        return [sum((V[j] * b[m].diff(lam(j + 1)) + b[j] * V[j].diff(lam(m + 1)) for j in range(k)), ZERO)
                for m in range(k)]

    def pair(a, b):
        return sum((P[(i, j)] * a[i] * b[j] for i in range(k) for j in range(k)), ZERO)

    Vf, Vg = sharp(df), sharp(dg)
    pab = pair(df, dg)
    lhs = [x - y - pab.diff(lam(m + 1)) for m, (x, y) in enumerate(zip(lie_deriv(Vf, dg), lie_deriv(Vg, df)))]
    rhs = [fg.diff(lam(m + 1)) for m in range(k)]
    one_res = 0.0
    for p in points:
        env = env_of(p)
        for a, b in zip(lhs, rhs):
            one_res = max(one_res, abs(a.evaluate(env) - b.evaluate(env)))
    jac = None
    if h is not None:
        def pb(u, v):
            return poisson_bracket(L, u, v)
        J = pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))
        jac = max(abs(J.evaluate(env_of(p))) for p in points)
    return BaseReport(P, fg, one_res, jac)
