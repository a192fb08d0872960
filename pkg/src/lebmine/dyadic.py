"""Exact dyadic rationals m / 2^k."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Union

Number = Union[int, Fraction, "Dyadic"]


@total_ordering
class Dyadic:
    __slots__ = ("m", "k")

    def __init__(self, m: int, k: int = 0):
        if k < 0:
            raise ValueError("exponent must be non-negative")
        while k > 0 and m % 2 == 0:
            m //= 2
            k -= 1
        self.m, self.k = m, k

    @classmethod
    def of(cls, x: Number) -> "Dyadic":
        if isinstance(x, Dyadic):
            return x
        x = Fraction(x)
        d = x.denominator
        if d & (d - 1):
            raise ValueError(f"{x} is not dyadic")
        return cls(x.numerator, d.bit_length() - 1)

    def fraction(self) -> Fraction:
        return Fraction(self.m, 2 ** self.k)

    def __add__(self, o: Number) -> "Dyadic":
        o = Dyadic.of(o)
        k = max(self.k, o.k)
        return Dyadic(self.m * 2 ** (k - self.k) + o.m * 2 ** (k - o.k), k)

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.m, self.k)

    def __sub__(self, o: Number) -> "Dyadic":
        return self + (-Dyadic.of(o))

    def __rsub__(self, o: Number) -> "Dyadic":
        return Dyadic.of(o) - self

    def __mul__(self, o: Number) -> "Dyadic":
        o = Dyadic.of(o)
        return Dyadic(self.m * o.m, self.k + o.k)

    __rmul__ = __mul__

    def __eq__(self, o) -> bool:
        try:
            o = Dyadic.of(o)
        except (TypeError, ValueError):
            return NotImplemented
        return (self.m, self.k) == (o.m, o.k)

    def __lt__(self, o: Number) -> bool:
        return self.fraction() < Dyadic.of(o).fraction()

    def __hash__(self) -> int:
        return hash(self.fraction())

    def floor_scaled(self, n: int) -> int:
        """floor(self * 2^n)."""
        return (self.m * 2 ** n) // 2 ** self.k

    def __repr__(self) -> str:
        return f"Dyadic({self.m}, {self.k})"

    def __str__(self) -> str:
        return str(self.m) if self.k == 0 else f"{self.m}/{2 ** self.k}"


def cantor_to_unit(prefix) -> tuple[Dyadic, Dyadic]:
    """Interval of F(g) = sum 2^-(i+1) g(i) over all extensions g of ``prefix``."""
    lo = Dyadic(0)
    for i, b in enumerate(prefix):
        if b not in (0, 1):
            raise ValueError("prefix must be a 0/1 string")
        if b:
            lo = lo + Dyadic(1, i + 1)
    return lo, lo + Dyadic(1, len(prefix))
