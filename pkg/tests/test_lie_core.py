import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dynhopf.lie_core import (AlgebraMismatch, AntisymmetryViolation, InvalidRank, JacobiViolation,
                              NonAbelianCartan, bracket, build_algebra, build_sl2, build_sln, invariance_residual,
                              jacobi_residual, killing)


def test_sl2_from_relations():
    g = build_algebra(3, {(2, 0): {0: 2}, (2, 1): {1: -2}, (0, 1): {2: 1}}, [2], ["e", "f", "h"])
    assert g.bracket_basis(0, 2) == {0: -2}
    assert jacobi_residual(g) is None


def test_antisymmetry_violation():
    with pytest.raises(AntisymmetryViolation):
        build_algebra(2, {(0, 1): {0: 1}, (1, 0): {0: 1}})


def test_so3_is_valid():
    g = build_algebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}})
    # brute-force Jacobi over every ordered triple, independent of the builder's loop
    for i, j, k in itertools.product(range(3), repeat=3):
        tot = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, v in g.bracket_basis(a, b).items():
                for l, w in g.bracket_basis(m, c).items():
                    tot[l] = tot.get(l, 0) + v * w
        assert not any(tot.values())


def test_jacobi_violation_names_triple():
    with pytest.raises(JacobiViolation) as e:
        build_algebra(3, {(0, 1): {0: 1}, (1, 2): {1: 1}})
    assert "(0, 1, 2)" in str(e.value)


def test_non_abelian_cartan():
    with pytest.raises(NonAbelianCartan):
        build_algebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (2, 0): {1: 1}}, cartan_indices=[0, 1])


def test_sl2_shape(sl2):
    assert sl2.dim == 3 and len(sl2.root_data) == 1 and sl2.cartan_indices == (2,)


def test_sl3_roots_by_brute_force(sl3):
    assert sl3.dim == 8 and sl3.rank == 2
    # count basis vectors that are common eigenvectors of ad(H) with nonzero eigenvalue
    eig = 0
    for x in range(sl3.dim):
        if x in sl3.cartan_indices:
            continue
        vals = []
        for h in sl3.cartan_indices:
            row = sl3.bracket_basis(h, x)
            assert set(row) <= {x}
            vals.append(row.get(x, 0))
        eig += any(vals)
    assert eig == 6 and len(sl3.root_data) == 3


def test_invalid_rank():
    with pytest.raises(InvalidRank):
        build_sln(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sln_dimension_and_roots(n):
    g = build_sln(n)
    assert g.dim == n * n - 1 and len(g.root_data) == n * (n - 1) // 2
    assert jacobi_residual(g) is None


def test_bracket_examples(sl2):
    e, f, h = (sl2.elem(x) for x in "efh")
    assert bracket(sl2, e, f) == h
    assert bracket(sl2, h, h).is_zero()
    assert bracket(sl2, e + f, h) == Fraction(-2) * e + Fraction(2) * f
    with pytest.raises(AlgebraMismatch):
        bracket(sl2, e, build_sl2().elem("e"))


def _numpy_killing():
    """Killing form of sl2 from 2x2 matrices: ad via commutators, trace via numpy."""
    E = np.array([[0, 1], [0, 0]], float)
    F = np.array([[0, 0], [1, 0]], float)
    H = np.array([[1, 0], [0, -1]], float)
    basis = [E, F, H]
    B = np.stack([b.ravel() for b in basis], axis=1)

    def ad(x):
        cols = [np.linalg.lstsq(B, (x @ b - b @ x).ravel(), rcond=None)[0] for b in basis]
        return np.stack(cols, axis=1)

    return np.array([[np.trace(ad(x) @ ad(y)) for y in basis] for x in basis])


def test_killing_against_numpy(sl2):
    K = _numpy_killing()
    # frozen: K(e,f) = 4, K(h,h) = 8
    assert K[0, 1] == pytest.approx(4) and K[2, 2] == pytest.approx(8)
    for i in range(3):
        for j in range(3):
            assert float(killing(sl2, sl2.elem(i), sl2.elem(j))) == pytest.approx(K[i, j], abs=1e-12)


@given(st.lists(st.integers(-3, 3), min_size=8, max_size=8), st.lists(st.integers(-3, 3), min_size=8, max_size=8))
def test_killing_symmetric(a, b):
    g = build_sln(3)
    x = sum((Fraction(c) * g.elem(i) for i, c in enumerate(a)), g.elem(0, 0))
    y = sum((Fraction(c) * g.elem(i) for i, c in enumerate(b)), g.elem(0, 0))
    assert killing(g, x, y) == killing(g, y, x)


def test_killing_invariant_on_basis(sl3):
    g = sl3
    for i, j, k in itertools.product(range(g.dim), repeat=3):
        x, y, z = g.elem(i), g.elem(j), g.elem(k)
        assert killing(g, bracket(g, x, y), z) + killing(g, y, bracket(g, x, z)) == 0


def test_invariance_residual_examples(sl2):
    assert all(not d for d in invariance_residual(sl2, {(0, 1, 2): 1}))
    res = invariance_residual(sl2, {(0, 1): 1})
    # ad_e(e∧f) = e∧h
    assert res[0] == {(0, 2): 1}
    assert all(not d for d in invariance_residual(sl2, {}))
