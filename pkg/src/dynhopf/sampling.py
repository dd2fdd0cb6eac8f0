"""Seeded rational sample points on the dual of the Cartan subalgebra."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, List, Sequence

from .scalar import PoleError, ScalarFunction, lam

DEFAULT_BOX = (Fraction(1, 10), Fraction(5))


def rational_point(rng: random.Random, k: int, box=DEFAULT_BOX, max_den: int = 64) -> List[Fraction]:
    lo, hi = box
    out = []
    for _ in range(k):
        d = rng.randint(1, max_den)
        n_lo = -(-lo.numerator * d // lo.denominator)   # ceil
        n_hi = hi.numerator * d // hi.denominator
        out.append(Fraction(rng.randint(n_lo, n_hi), d))
    return out


def env_of(point: Sequence[Fraction]) -> dict:
    return {lam(i + 1): float(v) for i, v in enumerate(point)}


def sample_points(k: int, count: int, seed: int = 0, box=DEFAULT_BOX, max_den: int = 64,
                  avoid: Iterable[ScalarFunction] = (), pole_tol: float = 1e-6,
                  max_tries: int = 10000) -> List[List[Fraction]]:
    """``count`` points where every function in ``avoid`` has |denominator| >= pole_tol."""
    rng = random.Random(seed)
    avoid = list(avoid)
    pts: List[List[Fraction]] = []
    tries = 0
    while len(pts) < count:
        tries += 1
        if tries > max_tries:
            raise PoleError("could not find pole-free sample points")
        p = rational_point(rng, k, box, max_den)
        env = env_of(p)
        try:
            for f in avoid:
                f.evaluate(env, pole_tol)
        except PoleError:
            continue
        if p in pts:
            continue
        pts.append(p)
    return pts
