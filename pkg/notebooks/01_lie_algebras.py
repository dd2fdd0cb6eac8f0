# ---
# jupyter:
#   jupytext:
#     formats: py:light
#     text_representation:
#       extension: .py
#       format_name: light
#       format_version: '1.5'
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# # Lie algebras from structure constants
#
# Build sl2 and sl3, check the relations, and look at roots and the Killing form.

from dynhopf.lie_core import AlgElement, bracket, build_algebra, build_sl2, build_sln, killing

# +
g = build_sl2()
print(g.basis_labels)
e, f, h = (AlgElement(g, {g.index(x): 1}) for x in "efh")
print("[e, f] =", bracket(g, e, f))
print("[h, e] =", bracket(g, h, e))
# -

# Killing form on the basis: K(e, f) = 4, K(h, h) = 8.

basis = [AlgElement(g, {i: 1}) for i in range(g.dim)]
for a, x in zip(g.basis_labels, basis):
    print(a, [str(killing(g, x, y)) for y in basis])

# +
g3 = build_sln(3)
print(g3.dim, "basis elements,", len(g3.root_data), "positive roots")
for root in g3.root_data:
    print(g3.basis_labels[root.pos], [str(v) for v in root.alpha])
# -

# A table that breaks Jacobi is rejected and the offending triple is named.

# +
from dynhopf.lie_core import LieError

try:
    build_algebra(3, {(0, 1): {0: 1}, (1, 2): {1: 1}}, cartan_indices=[2], labels=["a", "b", "c"])
except LieError as err:
    print(type(err).__name__, err)
