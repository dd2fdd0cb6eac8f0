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

# # The cobar-type complex

import random

from dynhopf.cli_io import random_element
from dynhopf.cochain import alt_two_cocycle, partial
from dynhopf.hopf_kernel import coproduct, multiply
from dynhopf.library import sl2_model

m = sl2_model(N=2)
e, f, d = m.x("e"), m.x("f"), m.d(1)

print("∂(e·e) =", partial(multiply(e, e)))
rng = random.Random(0)
print(all(partial(partial(random_element(m, rng, 1))).is_zero() for _ in range(10)))

# +
for T in (m.tensor(e, f), m.tensor(d, e) + partial(multiply(e, f)), coproduct(multiply(e, f))):
    res = alt_two_cocycle(T)
    print(res.passed, res.alt)
