"""Finite-dimensional Lie algebras given by exact structure constants.

Everything here is exact (``fractions.Fraction``).  Basis order is the
PBW order used downstream.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

Structure = Dict[Tuple[int, int], Dict[int, Fraction]]


class LieError(ValueError):
    pass


class JacobiViolation(LieError):
    def __init__(self, triple, residual):
        super().__init__(f"Jacobi identity fails on basis triple {triple}: {residual}")
        self.triple = triple
        self.residual = residual


class AntisymmetryViolation(LieError):
    pass


class NonAbelianCartan(LieError):
    pass


class InvalidRank(LieError):
    pass


class AlgebraMismatch(LieError):
    pass


class MissingRootData(LieError):
    pass


@dataclass(frozen=True)
class Root:
    pos: int                       # basis index of E_alpha
    neg: int                       # basis index of E_{-alpha}
    alpha: Tuple[Fraction, ...]    # alpha(h_i) for the Cartan basis


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    dim: int
    basis_labels: Tuple[str, ...]
    structure: Structure = field(repr=False)
    cartan_indices: Tuple[int, ...]
    root_data: Optional[Tuple[Root, ...]] = None

    @property
    def rank(self) -> int:
        return len(self.cartan_indices)

    def bracket_basis(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.structure.get((i, j), {})

    def index(self, label: str) -> int:
        return self.basis_labels.index(label)

    def elem(self, label_or_index, coeff=1) -> "AlgElement":
        i = label_or_index if isinstance(label_or_index, int) else self.index(label_or_index)
        return AlgElement(self, {i: Fraction(coeff)})

    def ad_matrix(self, x: Mapping[int, Fraction]) -> List[List[Fraction]]:
        m = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for i, c in x.items():
            for j in range(self.dim):
                for k, v in self.bracket_basis(i, j).items():
                    m[k][j] += c * v
        return m

    def killing_matrix(self) -> List[List[Fraction]]:
        ads = [self.ad_matrix({i: Fraction(1)}) for i in range(self.dim)]
        return [[_trace_prod(ads[i], ads[j]) for j in range(self.dim)] for i in range(self.dim)]

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, basis={list(self.basis_labels)}, cartan={list(self.cartan_indices)})"


def _trace_prod(a, b) -> Fraction:
    n = len(a)
    return sum((a[i][k] * b[k][i] for i in range(n) for k in range(n)), Fraction(0))


class AlgElement:
    """Sparse element of g; coefficients are rationals (or scalar functions)."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: LieAlgebra, coeffs: Mapping[int, object] | None = None):
        self.algebra = algebra
        self.coeffs = {i: c for i, c in (coeffs or {}).items() if c}

    def __add__(self, other: "AlgElement") -> "AlgElement":
        _same(self.algebra, other.algebra)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return AlgElement(self.algebra, out)

    def __neg__(self):
        return AlgElement(self.algebra, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        return AlgElement(self.algebra, {i: c * v for i, v in self.coeffs.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.coeffs
        return isinstance(other, AlgElement) and self.algebra is other.algebra and (self - other).coeffs == {}

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        labels = self.algebra.basis_labels
        return " + ".join(f"{c}*{labels[i]}" for i, c in sorted(self.coeffs.items()))


def _same(a: LieAlgebra, b: LieAlgebra):
    if a is not b:
        raise AlgebraMismatch("elements belong to different algebras")


def bracket(g: LieAlgebra, x: AlgElement, y: AlgElement) -> AlgElement:
    _same(g, x.algebra)
    _same(g, y.algebra)
    out: Dict[int, object] = {}
    for i, a in x.coeffs.items():
        for j, b in y.coeffs.items():
            for k, c in g.bracket_basis(i, j).items():
                out[k] = out.get(k, 0) + a * b * c
    return AlgElement(g, out)


def killing(g: LieAlgebra, x: AlgElement, y: AlgElement) -> Fraction:
    _same(g, x.algebra)
    _same(g, y.algebra)
    return _trace_prod(g.ad_matrix(x.coeffs), g.ad_matrix(y.coeffs))


def build_algebra(dim: int, structure: Mapping[Tuple[int, int], Mapping[int, object]],
                  cartan_indices: Sequence[int] = (), labels: Sequence[str] | None = None,
                  root_data: Sequence[Root] | None = None) -> LieAlgebra:
    """Validate structure constants and complete them antisymmetrically.

    ``structure`` maps ``(i, j)`` to ``{k: c}`` meaning ``[x_i, x_j] = sum c x_k``.
    Pairs with ``i > j`` may be given; they must agree with antisymmetry.
    """
    if dim < 1:
        raise LieError("dimension must be positive")
    full: Structure = {}
    for (i, j), row in structure.items():
        if not (0 <= i < dim and 0 <= j < dim):
            raise LieError(f"index out of range in bracket ({i}, {j})")
        row = {k: Fraction(c) for k, c in row.items() if Fraction(c)}
        if any(not 0 <= k < dim for k in row):
            raise LieError(f"index out of range in value of [{i}, {j}]")
        if i == j:
            if row:
                raise AntisymmetryViolation(f"[x{i}, x{i}] must vanish")
            continue
        neg = {k: -c for k, c in row.items()}
        if (j, i) in full and full[(j, i)] != neg:
            raise AntisymmetryViolation(f"[x{i}, x{j}] and [x{j}, x{i}] are not opposite")
        if (i, j) in full and full[(i, j)] != row:
            raise AntisymmetryViolation(f"conflicting values for [x{i}, x{j}]")
        if row:
            full[(i, j)] = row
            full[(j, i)] = neg
    cart = tuple(sorted(set(cartan_indices)))
    for i, j in itertools.combinations(cart, 2):
        if full.get((i, j)):
            raise NonAbelianCartan(f"[x{i}, x{j}] != 0 for Cartan indices")
    labels = tuple(labels) if labels else tuple(f"x{i}" for i in range(dim))
    g = LieAlgebra(dim, labels, full, cart, tuple(root_data) if root_data else None)
    bad = jacobi_residual(g)
    if bad is not None:
        raise JacobiViolation(*bad)
    return g


def jacobi_residual(g: LieAlgebra):
    """First failing (i, j, k) with its residual, or None."""
    for i, j, k in itertools.combinations(range(g.dim), 3):
        res: Dict[int, Fraction] = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, v in g.bracket_basis(a, b).items():
                for l, w in g.bracket_basis(m, c).items():
                    res[l] = res.get(l, 0) + v * w
        res = {l: v for l, v in res.items() if v}
        if res:
            return (i, j, k), res
    return None


def build_sln(n: int, root_scale: str = "matrix") -> LieAlgebra:
    """sl_n in the Chevalley basis of matrix units.

    Order: E_ij (i<j), then E_ji (i<j), then H_i = E_ii - E_{i+1,i+1}.
    ``root_scale="killing"`` rescales each E_alpha so that K(E_alpha, E_-alpha) = 1.
    """
    if n < 2:
        raise InvalidRank(f"sl_n needs n >= 2, got {n}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mats = []
    labels = []
    for i, j in pairs:
        mats.append({(i, j): Fraction(1)})
        labels.append(f"E{i + 1}{j + 1}")
    for i, j in pairs:
        mats.append({(j, i): Fraction(1)})
        labels.append(f"E{j + 1}{i + 1}")
    for i in range(n - 1):
        mats.append({(i, i): Fraction(1), (i + 1, i + 1): Fraction(-1)})
        labels.append(f"H{i + 1}")
    np_ = len(pairs)
    if root_scale == "killing":
        # K(E_ij, E_ji) = 2n for matrix units
        for a in range(np_):
            mats[a] = {k: v / (2 * n) for k, v in mats[a].items()}
    elif root_scale != "matrix":
        raise ValueError(f"unknown root_scale {root_scale!r}")
    structure = _structure_from_matrices(mats, n)
    cartan = list(range(2 * np_, 2 * np_ + n - 1))
    g0 = build_algebra(len(mats), structure, cartan, labels)
    roots = []
    for a in range(np_):
        alpha = []
        for h in cartan:
            row = g0.bracket_basis(h, a)
            alpha.append(row.get(a, Fraction(0)))
        roots.append(Root(a, a + np_, tuple(alpha)))
    return LieAlgebra(g0.dim, g0.basis_labels, g0.structure, g0.cartan_indices, tuple(roots))


def build_sl2(root_scale: str = "matrix") -> LieAlgebra:
    g = build_sln(2, root_scale)
    return LieAlgebra(3, ("e", "f", "h"), g.structure, g.cartan_indices, g.root_data)


def build_abelian(dim: int, labels: Sequence[str] | None = None) -> LieAlgebra:
    """Abelian algebra whose whole basis is Cartan (useful for pure D-twists)."""
    return build_algebra(dim, {}, range(dim), labels)


def _structure_from_matrices(mats, n) -> Structure:
    # express [A, B] in the basis via the matrix entries; the basis is
    # linearly independent so solve on a spanning set of coordinates
    def mul(a, b):
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i, k), v in a.items():
            for (k2, j), w in b.items():
                if k == k2:
                    out[(i, j)] = out.get((i, j), 0) + v * w
        return out

    def comm(a, b):
        out = dict(mul(a, b))
        for k, v in mul(b, a).items():
            out[k] = out.get(k, 0) - v
        return {k: v for k, v in out.items() if v}

    coords = _decomposer(mats, n)
    structure: Structure = {}
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            c = comm(mats[i], mats[j])
            if c:
                structure[(i, j)] = coords(c)
    return structure


def _decomposer(mats, n):
    # off-diagonal units are each carried by a single basis element; the
    # diagonal part is decomposed along H_i by cumulative sums
    off = {}
    hs = []
    for idx, m in enumerate(mats):
        keys = [k for k in m if k[0] != k[1]]
        if keys:
            (key,) = keys
            off[key] = (idx, m[key])
        else:
            hs.append(idx)

    def coords(c):
        out: Dict[int, Fraction] = {}
        for key, v in c.items():
            if key[0] != key[1]:
                idx, scale = off[key]
                out[idx] = out.get(idx, 0) + v / scale
        # diagonal: d = sum t_i (E_ii - E_{i+1,i+1}) => t_i = d_1 + ... + d_i
        run = Fraction(0)
        for i, h in enumerate(hs):
            run += c.get((i, i), Fraction(0))
            if run:
                out[h] = out.get(h, 0) + run
        return {k: v for k, v in out.items() if v}

    return coords


# -- tensors over g ------------------------------------------------------

def wedge_sort(word: Sequence[int]):
    """(sign, sorted word) for a wedge monomial, or (0, None) on repeats."""
    w = list(word)
    if len(set(w)) != len(w):
        return 0, None
    sign = 1
    # insertion sort counting transpositions
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            w[j - 1], w[j] = w[j], w[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(w)


def ad_tensor(g: LieAlgebra, x: int, T: Mapping[tuple, object], wedge: bool) -> Dict[tuple, object]:
    """Leibniz extension of ad_{x_i} to g^{(x)m} or wedge^m g."""
    out: Dict[tuple, object] = {}
    for word, c in T.items():
        for pos, y in enumerate(word):
            for k, v in g.bracket_basis(x, y).items():
                nw = word[:pos] + (k,) + word[pos + 1:]
                s = 1
                if wedge:
                    s, nw = wedge_sort(nw)
                    if not s:
                        continue
                out[nw] = out.get(nw, 0) + s * v * c
    return {w: c for w, c in out.items() if c}


def invariance_residual(g: LieAlgebra, T: Mapping[tuple, object], wedge: bool = True) -> List[Dict[tuple, object]]:
    """[ad_{x_i}(T) for each basis x_i]; all empty iff T is g-invariant."""
    if T and max(len(w) for w in T) > 3:
        raise LieError("tensor degree above 3 not supported")
    return [ad_tensor(g, i, T, wedge) for i in range(g.dim)]


def cartan_killing(g: LieAlgebra) -> List[List[Fraction]]:
    K = g.killing_matrix()
    return [[K[a][b] for b in g.cartan_indices] for a in g.cartan_indices]


def invert_matrix(m: List[List[Fraction]]) -> List[List[Fraction]]:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise LieError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]
