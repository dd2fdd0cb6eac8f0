"""Dynamical twists: Θ, Taylor shifts, shifted cocycles, Δ_λ and the QDYBE.

Coordinates λ_i on η* are dual to the Cartan basis h_i of the algebra, so
``θ = Σ ∂_i ⊗ h_i``.  A shift ``λ + ℏ s h^{(j)}`` acts on a weight vector in
tensor slot j by substituting λ -> λ + ℏ s μ, μ the weight of that vector.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .hopf_kernel import (ArityMismatch, HopfModel, TensorElement, counit_slot,
                          delta_slot, exp_series, invert_series, multiply)
from .lie_core import LieAlgebra
from .scalar import ONE, ZERO, ScalarFunction, lam
from .series import HbarSeries


class NotZeroWeight(ValueError):
    pass


def _multi_indices(k: int, total: int):
    """All multi-indices of length k with |J| = total."""
    if k == 0:
        if total == 0:
            yield ()
        return
    for a in range(total + 1):
        for rest in _multi_indices(k - 1, total - a):
            yield (a,) + rest


def _jfact(J) -> int:
    out = 1
    for a in J:
        out *= factorial(a)
    return out


def _diff_J(f: ScalarFunction, J) -> ScalarFunction:
    for i, a in enumerate(J):
        for _ in range(a):
            f = f.diff(lam(i + 1))
    return f


def cartan_word(model: HopfModel, J) -> tuple:
    """The sorted PBW word h_1^{J_1} ... h_k^{J_k}."""
    cart = model.g.cartan_indices
    word = []
    for i, a in enumerate(J):
        word += [cart[i]] * a
    return tuple(sorted(word))


# -- Θ -----------------------------------------------------------------------

def theta(model: HopfModel, variant: str = "normal") -> TensorElement:
    """θ = Σ ∂_i ⊗ h_i, or θ̃ = ½ Σ (∂_i ⊗ h_i - h_i ⊗ ∂_i)."""
    if len(model.g.cartan_indices) < model.k:
        raise ValueError("need at least k Cartan elements")
    out = model.zero(2)
    for i in range(model.k):
        h = model.x(model.g.cartan_indices[i])
        t = model.tensor(model.d(i + 1), h)
        if variant == "normal":
            out = out + t
        elif variant == "weyl":
            out = out + (t - model.tensor(h, model.d(i + 1))).scale(Fraction(1, 2))
        else:
            raise ValueError(f"unknown variant {variant!r}")
    return out


def build_theta(model: HopfModel, variant: str = "normal") -> TensorElement:
    """Θ = exp(ℏθ) truncated at the model's ℏ-order."""
    return exp_series(theta(model, variant).shift(1))


# -- zero weight and Taylor shifts -------------------------------------------

def _check_pure(F: TensorElement):
    if not F.is_differential_free():
        raise ArityMismatch("expected a U(g)-valued function (no derivatives)")


def zero_weight_residual(F: TensorElement) -> List[TensorElement]:
    """[F, h⊗1 + 1⊗h] for each Cartan basis element h (arity 2)."""
    m = F.model
    out = []
    for c in m.g.cartan_indices:
        H = m.tensor(m.x(c), m.one()) + m.tensor(m.one(), m.x(c))
        out.append(multiply(F, H) - multiply(H, F))
    return out


def is_zero_weight(F: TensorElement) -> bool:
    return all(r.is_zero() for r in zero_weight_residual(F))


def taylor_shift(F: TensorElement, slot: int = 3, scale=1) -> TensorElement:
    """F(λ + ℏ·scale·h^{(slot)}) as an arity-3 element; F occupies the other two slots.

    slot 3 gives F¹²(λ + ℏ s h⁽³⁾), slot 1 gives F²³(λ + ℏ s h⁽¹⁾).
    """
    if F.arity != 2:
        raise ArityMismatch("taylor_shift needs arity 2")
    _check_pure(F)
    m = F.model
    scale = Fraction(scale)
    s = slot - 1
    if s not in (0, 1, 2):
        raise ValueError("slot must be 1, 2 or 3")
    N = m.N
    out: Dict[tuple, ScalarFunction] = {}
    for (h, (m1, m2)), c in F.terms.items():
        for order in range(N - h + 1):
            for J in _multi_indices(m.k, order):
                dc = _diff_J(c, J)
                if not dc:
                    continue
                coef = dc.scale(scale ** order / _jfact(J))
                hm = (m.zero_I, cartan_word(m, J))
                ms = [m1, m2]
                ms.insert(s, hm)
                key = (h + order, tuple(ms))
                out[key] = out[key] + coef if key in out else coef
    return TensorElement(m, 3, out, F.overflow)


def shift_conjugation_residual(F: TensorElement, Theta: Optional[TensorElement] = None) -> TensorElement:
    """[(Δ⊗id)Θ]·F¹²(λ) - F¹²(λ+ℏh⁽³⁾)·(Δ⊗id)Θ, zero for any U(g)⊗U(g)-valued F."""
    m = F.model
    if Theta is None:
        Theta = build_theta(m)
    DT = delta_slot(Theta, 1)
    return multiply(DT, F.embed((0, 1), 3), coef_slot=1) - multiply(taylor_shift(F, 3), DT)


@dataclass
class ShiftedCocycleResult:
    residual: TensorElement
    counit: Tuple[TensorElement, TensorElement]
    variant: str

    @property
    def first_order(self) -> Optional[int]:
        """Lowest ℏ-order at which the cocycle or counit equation fails."""
        orders = [x.first_order() for x in (self.residual,) + tuple(self.counit)]
        orders = [o for o in orders if o is not None]
        return min(orders) if orders else None

    @property
    def passed(self) -> bool:
        return self.first_order is None


def shifted_cocycle_residual(F: TensorElement, variant: str = "normal", check_weight: bool = True) -> ShiftedCocycleResult:
    """Shifted cocycle and counit residuals of a U(g)⊗U(g)-valued F(λ).

    normal: (Δ₀⊗id)F · F¹²(λ+ℏh⁽³⁾) - (id⊗Δ₀)F · F²³(λ)
    weyl:   (Δ₀⊗id)F · F¹²(λ+½ℏh⁽³⁾) - (id⊗Δ₀)F · F²³(λ-½ℏh⁽¹⁾)
    """
    _check_pure(F)
    if check_weight and not is_zero_weight(F):
        raise NotZeroWeight("F does not commute with the diagonal Cartan action")
    if variant == "normal":
        left = taylor_shift(F, 3)
        right = F.embed((1, 2), 3)
    elif variant == "weyl":
        left = taylor_shift(F, 3, Fraction(1, 2))
        right = taylor_shift(F, 1, Fraction(-1, 2))
    else:
        raise ValueError(f"unknown variant {variant!r}")
    res = multiply(delta_slot(F, 1), left) - multiply(delta_slot(F, 2), right)
    one = F.model.one(1)
    counit = (counit_slot(F, 1) - one, counit_slot(F, 2) - one)
    return ShiftedCocycleResult(res, counit, variant)


def make_dynamical_twistor(F: TensorElement, variant: str = "normal",
                           Theta: Optional[TensorElement] = None) -> TensorElement:
    """ℱ = F(λ)·Θ (F on the left)."""
    if Theta is None:
        Theta = build_theta(F.model, variant)
    return multiply(F, Theta)



def expected_alpha(model: HopfModel, f) -> TensorElement:
    """exp(ℏ Σ h_i ∂_i) f = Σ_J ℏ^{|J|}/J! (∂^J f) h^J."""
    f = ScalarFunction.coerce(f)
    out = model.zero(1)
    for n in range(model.N + 1):
        for J in _multi_indices(model.k, n):
            c = _diff_J(f, J)
            if c:
                out = out + model.mono(model.zero_I, cartan_word(model, J), c.scale(Fraction(1, _jfact(J)))).shift(n)
    return out


def twisted_base_residual(F: TensorElement, functions: Sequence, variant: str = "normal") -> Dict[str, object]:
    """α_ℱ f - exp(ℏΣh_i∂_i)f, β_ℱ f - f and f *_ℱ g - fg for ℱ = F·Θ."""
    from .hopf_kernel import TwistedStructures
    m = F.model
    TS = TwistedStructures(make_dynamical_twistor(F, variant))
    fs = [ScalarFunction.coerce(f) for f in functions]
    out: Dict[str, object] = {}
    for i, f in enumerate(fs):
        out[f"alpha[{i}]"] = TS.alpha(f) - expected_alpha(m, f)
        out[f"beta[{i}]"] = TS.beta(f) - m.scalar(f)
        for j, g in enumerate(fs):
            out[f"star[{i},{j}]"] = TS.star(f, g) - HbarSeries({0: f * g}, m.N)
    return out

# -- projection T and Δ_λ ------------------------------------------------------

def projection_T(E, Theta: Optional[TensorElement] = None) -> TensorElement:
    """Pr(Θ E Θ⁻¹): the zeroth differential-order part after conjugation.

    ``E`` is either an arity-2 TensorElement (global coefficients read as
    belonging to the first factor) or a list of pairs (x, y) of arity-1
    elements standing for Σ x ⊗ y with separate coefficients.
    """
    if isinstance(E, TensorElement):
        m = E.model
        pairs = []
        for (h, (m1, m2)), c in E.terms.items():
            x = TensorElement(m, 1, {(h, (m1,)): c})
            y = TensorElement(m, 1, {(0, (m2,)): ONE})
            pairs.append((x, y))
    else:
        pairs = list(E)
        if not pairs:
            raise ValueError("empty element")
        m = pairs[0][0].model
    if Theta is None:
        Theta = build_theta(m)
    Tinv = invert_series(Theta)
    total = m.zero(2)
    for x, y in pairs:
        for (h, (tm1, tm2)), c in Theta.terms.items():
            left = multiply(TensorElement(m, 1, {(h, (tm1,)): c}), x)
            right = multiply(TensorElement(m, 1, {(0, (tm2,)): ONE}), y)
            total = total + m.tensor(left, right)
    total = multiply(total, Tinv)
    zero = m.zero_I
    return TensorElement(m, 2, {k: c for k, c in total.terms.items() if all(mm[0] == zero for mm in k[1])},
                         total.overflow)


def delta_lambda(u: TensorElement, F: TensorElement) -> TensorElement:
    """T(Δ_ℱ(u)) for ℱ = F·Θ and u ∈ U(g) embedded in H."""
    from .hopf_kernel import coproduct
    m = F.model
    Theta = build_theta(m)
    cF = make_dynamical_twistor(F, Theta=Theta)
    twisted = multiply(invert_series(cF), multiply(coproduct(u), cF))
    pairs = []
    for (h, (m1, m2)), c in twisted.terms.items():
        pairs.append((TensorElement(m, 1, {(h, (m1,)): c}), TensorElement(m, 1, {(0, (m2,)): ONE})))
    if not pairs:
        return m.zero(2)
    return projection_T(pairs, Theta)


def quasi_hopf_coproduct(u: TensorElement, F: TensorElement) -> TensorElement:
    """F(λ)⁻¹ (Δ₀u) F(λ), computed directly in U(g)⊗U(g)."""
    from .hopf_kernel import coproduct
    return multiply(invert_series(F), multiply(coproduct(u), F))


# -- weight modules and QDYBE -----------------------------------------------------

Matrix = List[List[Fraction]]


class WeightModule:
    """Finite-dimensional g-module with a basis of η-weight vectors."""

    def __init__(self, g: LieAlgebra, action: Dict[int, Matrix], weights: Optional[Sequence[Sequence[Fraction]]] = None):
        self.g = g
        self.action = {i: [[Fraction(v) for v in row] for row in mat] for i, mat in action.items()}
        self.dim = len(next(iter(self.action.values())))
        if weights is None:
            weights = []
            for a in range(self.dim):
                weights.append(tuple(self.action[c][a][a] for c in g.cartan_indices))
        self.weights = [tuple(Fraction(w) for w in ws) for ws in weights]
        self._validate()

    def _validate(self):
        g = self.g
        for c_idx, c in enumerate(g.cartan_indices):
            M = self.action[c]
            for a in range(self.dim):
                for b in range(self.dim):
                    want = self.weights[a][c_idx] if a == b else 0
                    if M[a][b] != want:
                        raise ValueError("Cartan action is not diagonal with the stated weights")
        for root in g.root_data or ():
            for idx, sign in ((root.pos, 1), (root.neg, -1)):
                M = self.action[idx]
                for a in range(self.dim):
                    for b in range(self.dim):
                        if M[a][b]:
                            diff = tuple(x - y for x, y in zip(self.weights[a], self.weights[b]))
                            if diff != tuple(sign * v for v in root.alpha):
                                raise ValueError("root vector does not shift weights by its root")

    @staticmethod
    def fundamental(g: LieAlgebra, n: int) -> "WeightModule":
        """Defining representation of sl_n built with ``root_scale="matrix"``."""
        mats = {}
        for idx, label in enumerate(g.basis_labels):
            M = [[Fraction(0)] * n for _ in range(n)]
            if label in ("e", "f", "h"):
                label = {"e": "E12", "f": "E21", "h": "H1"}[label]
            if label[0] == "E":
                i, j = int(label[1]) - 1, int(label[2]) - 1
                M[i][j] = Fraction(1)
            else:
                i = int(label[1:]) - 1
                M[i][i], M[i + 1][i + 1] = Fraction(1), Fraction(-1)
            mats[idx] = M
        return WeightModule(g, mats)

    def word_matrix(self, word: tuple) -> Matrix:
        d = self.dim
        M = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
        for x in word:
            A = self.action[x]
            M = [[sum(M[i][t] * A[t][j] for t in range(d)) for j in range(d)] for i in range(d)]
        return M

    def weight(self, a: int, k: int) -> Tuple[Fraction, ...]:
        return self.weights[a][:k]


class OpSeries:
    """ℏ-series of λ-dependent operators on V^{⊗m}, stored sparsely."""

    def __init__(self, V: WeightModule, m: int, N: int, k: int, terms: Dict[tuple, ScalarFunction] | None = None):
        self.V, self.m, self.N, self.k = V, m, N, k
        self.terms: Dict[tuple, ScalarFunction] = {}
        for key, c in (terms or {}).items():
            if key[0] <= N and c:
                self.terms[key] = c

    def basis(self):
        return list(itertools.product(range(self.V.dim), repeat=self.m))

    @staticmethod
    def identity(V, m, N, k) -> "OpSeries":
        return OpSeries(V, m, N, k, {(0, b, b): ONE for b in itertools.product(range(V.dim), repeat=m)})

    def _new(self, terms) -> "OpSeries":
        return OpSeries(self.V, self.m, self.N, self.k, terms)

    def __add__(self, other: "OpSeries") -> "OpSeries":
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out[key] + c if key in out else c
        return self._new(out)

    def __neg__(self) -> "OpSeries":
        return self._new({key: -c for key, c in self.terms.items()})

    def __sub__(self, other: "OpSeries") -> "OpSeries":
        return self + (-other)

    def __matmul__(self, other: "OpSeries") -> "OpSeries":
        by_row: Dict[tuple, list] = {}
        for (h, r, c), v in other.terms.items():
            by_row.setdefault(r, []).append((h, c, v))
        out: Dict[tuple, ScalarFunction] = {}
        for (h1, r, c), v in self.terms.items():
            for h2, c2, w in by_row.get(c, ()):
                if h1 + h2 > self.N:
                    continue
                key = (h1 + h2, r, c2)
                t = v * w
                out[key] = out[key] + t if key in out else t
        return self._new(out)

    def is_zero(self) -> bool:
        return not self.terms

    def first_order(self) -> Optional[int]:
        return min((key[0] for key in self.terms), default=None)

    def order_part(self, n: int) -> Dict[tuple, ScalarFunction]:
        return {(r, c): v for (h, r, c), v in self.terms.items() if h == n}

    def inverse(self) -> "OpSeries":
        one = OpSeries.identity(self.V, self.m, self.N, self.k)
        X = self - one
        if X.order_part(0):
            raise ValueError("leading term is not the identity")
        out, power = one, one
        for _ in range(self.N):
            power = power @ (-X)
            if power.is_zero():
                break
            out = out + power
        return out

    def is_zero_weight(self) -> bool:
        for (_, r, c) in self.terms:
            wr = [sum(x) for x in zip(*(self.V.weight(a, self.k) for a in r))]
            wc = [sum(x) for x in zip(*(self.V.weight(a, self.k) for a in c))]
            if wr != wc:
                return False
        return True

    def max_abs_at(self, point) -> float:
        from .sampling import env_of
        env = env_of(point)
        vals = {}
        for (h, r, c), v in self.terms.items():
            vals[(h, r, c)] = abs(v.evaluate(env))
        return max(vals.values(), default=0.0)


def rep_operator(X: TensorElement, V: WeightModule) -> OpSeries:
    """Image of a U(g)^{⊗m}-valued function in End(V^{⊗m})."""
    _check_pure(X)
    m = X.arity
    out: Dict[tuple, ScalarFunction] = {}
    for (h, ms), c in X.terms.items():
        mats = [V.word_matrix(w) for _, w in ms]
        for r in itertools.product(range(V.dim), repeat=m):
            for col in itertools.product(range(V.dim), repeat=m):
                v = Fraction(1)
                for t in range(m):
                    v *= mats[t][r[t]][col[t]]
                    if not v:
                        break
                if v:
                    key = (h, r, col)
                    t_ = c.scale(v)
                    out[key] = out[key] + t_ if key in out else t_
    return OpSeries(V, m, X.model.N, X.model.k, out)


class DynamicalR:
    """R(λ) acting on V⊗V as an ℏ-series with λ-dependent entries."""

    def __init__(self, op: OpSeries):
        if op.m != 2:
            raise ArityMismatch("R acts on V⊗V")
        if not op.is_zero_weight():
            raise NotZeroWeight("R(λ) does not preserve total weight")
        self.op = op

    @staticmethod
    def from_twist(F: TensorElement, V: WeightModule, R0: Optional[TensorElement] = None) -> "DynamicalR":
        """R(λ) = F²¹(λ)⁻¹ R₀ F¹²(λ)."""
        F12 = rep_operator(F, V)
        F21 = rep_operator(F.flip(), V)
        R0op = rep_operator(R0, V) if R0 is not None else OpSeries.identity(V, 2, F.model.N, F.model.k)
        return DynamicalR(F21.inverse() @ R0op @ F12)

    def placed(self, i: int, j: int, shift_slot: Optional[int] = None, scale=1) -> OpSeries:
        """R^{ij}(λ + ℏ·scale·h^{(shift_slot)}) on V⊗V⊗V."""
        op = self.op
        V, N, k = op.V, op.N, op.k
        scale = Fraction(scale)
        out: Dict[tuple, ScalarFunction] = {}
        other = ({0, 1, 2} - {i - 1, j - 1}).pop()
        for (h, (a, b), (c, d)), v in op.terms.items():
            for x in range(V.dim):
                row = [0, 0, 0]
                col = [0, 0, 0]
                row[i - 1], row[j - 1], row[other] = a, b, x
                col[i - 1], col[j - 1], col[other] = c, d, x
                if shift_slot is None:
                    parts = [(0, v)]
                else:
                    mu = V.weight((row[shift_slot - 1]), k)
                    parts = _shift_parts(v, [scale * w for w in mu], N - h)
                for n, w in parts:
                    key = (h + n, tuple(row), tuple(col))
                    out[key] = out[key] + w if key in out else w
        return OpSeries(V, 3, N, k, out)


def _shift_parts(f: ScalarFunction, mu: Sequence[Fraction], upto: int) -> List[Tuple[int, ScalarFunction]]:
    """Taylor coefficients of f(λ + ℏμ) up to ℏ^upto."""
    out = []
    for n in range(upto + 1):
        acc = ZERO
        for J in _multi_indices(len(mu), n):
            c = Fraction(1, _jfact(J))
            for a, w in zip(J, mu):
                c *= w ** a
            if c:
                acc = acc + _diff_J(f, J).scale(c)
        if acc:
            out.append((n, acc))
    return out


def qdybe_residual(R: DynamicalR, variant: str = "normal") -> OpSeries:
    """LHS - RHS of the dynamical Yang-Baxter equation on V⊗V⊗V mod ℏ^{N+1}."""
    if variant == "normal":
        lhs = R.placed(1, 2) @ R.placed(1, 3, 2) @ R.placed(2, 3)
        rhs = R.placed(2, 3, 1) @ R.placed(1, 3) @ R.placed(1, 2, 3)
    elif variant == "weyl":
        half = Fraction(1, 2)
        lhs = R.placed(1, 2, 3, -half) @ R.placed(1, 3, 2, half) @ R.placed(2, 3, 1, -half)
        rhs = R.placed(2, 3, 1, half) @ R.placed(1, 3, 2, -half) @ R.placed(1, 2, 3, half)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return lhs - rhs
