"""Exact half-integer arithmetic.

All endpoint data (A, B, x, y, z exponents) of the calculus lives in
(1/2)Z.  Values are stored as doubled integers so every comparison and
arithmetic operation is exact; floats never appear.
"""

from __future__ import annotations

import functools
from fractions import Fraction


@functools.total_ordering
class HalfInt:
    """An element of (1/2)Z, stored as ``doubled`` = 2*value."""

    __slots__ = ("doubled",)

    def __init__(self, doubled: int):
        if not isinstance(doubled, int):
            raise TypeError("HalfInt stores a doubled integer")
        object.__setattr__(self, "doubled", doubled)

    def __setattr__(self, *a):
        raise AttributeError("HalfInt is immutable")

    # -- construction ------------------------------------------------

    @staticmethod
    def of(v) -> "HalfInt":
        """Coerce an int, HalfInt, Fraction or string like '-3/2'."""
        if isinstance(v, HalfInt):
            return v
        if isinstance(v, int):
            return HalfInt(2 * v)
        if isinstance(v, Fraction):
            if v.denominator == 1:
                return HalfInt(2 * v.numerator)
            if v.denominator == 2:
                return HalfInt(v.numerator)
            raise ValueError(f"not a half-integer: {v}")
        if isinstance(v, str):
            return HalfInt.parse(v)
        raise TypeError(f"cannot coerce {v!r} to HalfInt")

    @staticmethod
    def parse(s: str) -> "HalfInt":
        s = s.strip().replace("−", "-")  # unicode minus
        if "/" in s:
            num, den = s.split("/")
            num, den = int(num), int(den)
            if den == 2:
                return HalfInt(num)
            if den == 1:
                return HalfInt(2 * num)
            raise ValueError(f"not a half-integer: {s}")
        return HalfInt(2 * int(s))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "HalfInt":
        return HalfInt(self.doubled + HalfInt.of(other).doubled)

    __radd__ = __add__

    def __sub__(self, other) -> "HalfInt":
        return HalfInt(self.doubled - HalfInt.of(other).doubled)

    def __rsub__(self, other) -> "HalfInt":
        return HalfInt(HalfInt.of(other).doubled - self.doubled)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.doubled)

    def __mul__(self, n: int) -> "HalfInt":
        if not isinstance(n, int):
            raise TypeError("HalfInt may only be scaled by an integer")
        return HalfInt(self.doubled * n)

    __rmul__ = __mul__

    def __abs__(self) -> "HalfInt":
        return HalfInt(abs(self.doubled))

    def __eq__(self, other) -> bool:
        try:
            return self.doubled == HalfInt.of(other).doubled
        except TypeError:
            return NotImplemented

    def __lt__(self, other) -> bool:
        return self.doubled < HalfInt.of(other).doubled

    def __hash__(self):
        return hash(("HalfInt", self.doubled))

    # -- queries -------------------------------------------------------

    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def is_half_odd(self) -> bool:
        """True on the coset Z + 1/2."""
        return self.doubled % 2 != 0

    def floor(self) -> int:
        return self.doubled // 2

    def ceil(self) -> int:
        return -((-self.doubled) // 2)

    def as_int(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self.doubled // 2

    def as_fraction(self) -> Fraction:
        return Fraction(self.doubled, 2)

    # parity of an integer-valued HalfInt, as used in (-1)**(A-B) signs
    def parity_sign(self) -> int:
        """(-1)**self for integer self."""
        return -1 if self.as_int() % 2 else 1

    # -- rendering ------------------------------------------------------

    def __str__(self) -> str:
        if self.doubled % 2 == 0:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self.doubled})"


def hi(v) -> HalfInt:
    """Shorthand coercion used throughout the package and the tests."""
    return HalfInt.of(v)


ZERO = HalfInt(0)
HALF = HalfInt(1)
ONE = HalfInt(2)
