"""Truncated formal power series in ℏ over an arbitrary coefficient ring."""
from __future__ import annotations

from typing import Callable, Dict, Iterator, Optional, Tuple


class HbarSeries:
    """Σ_{n ≤ order} c_n ℏ^n; coefficients need +, * and a truth value."""

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Dict[int, object] | None = None, order: int = 4):
        self.order = order
        self.coeffs = {n: c for n, c in (coeffs or {}).items() if n <= order and _nonzero(c)}

    def __getitem__(self, n: int):
        return self.coeffs.get(n, 0)

    def items(self) -> Iterator[Tuple[int, object]]:
        return iter(sorted(self.coeffs.items()))

    def __add__(self, other: "HbarSeries") -> "HbarSeries":
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out[n] + c if n in out else c
        return HbarSeries(out, min(self.order, other.order))

    def __neg__(self) -> "HbarSeries":
        return HbarSeries({n: -c for n, c in self.coeffs.items()}, self.order)

    def __sub__(self, other: "HbarSeries") -> "HbarSeries":
        return self + (-other)

    def __mul__(self, other) -> "HbarSeries":
        if not isinstance(other, HbarSeries):
            return HbarSeries({n: c * other for n, c in self.coeffs.items()}, self.order)
        order = min(self.order, other.order)
        out: Dict[int, object] = {}
        for n, a in self.coeffs.items():
            for m, b in other.coeffs.items():
                if n + m <= order:
                    t = a * b
                    out[n + m] = out[n + m] + t if n + m in out else t
        return HbarSeries(out, order)

    def map(self, fn: Callable) -> "HbarSeries":
        return HbarSeries({n: fn(c) for n, c in self.coeffs.items()}, self.order)

    def is_zero(self) -> bool:
        return not self.coeffs

    def first_nonzero(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def __eq__(self, other) -> bool:
        if not isinstance(other, HbarSeries):
            other = HbarSeries({0: other}, self.order)
        return (self - other).is_zero()

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*ħ^{n}" for n, c in self.items())


def _nonzero(c) -> bool:
    z = getattr(c, "is_zero", None)
    if callable(z):
        return not z()
    return bool(c)
