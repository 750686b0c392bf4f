"""Coefficient domains: the rationals and prime fields.

Elements are plain Python numbers (``int`` / ``Fraction`` for QQ, ``int`` in
``[0, p)`` for GF(p)); the domain object only knows how to normalize and
invert them.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .primes import is_prime


class RationalField:
    characteristic = 0
    zero = 0
    one = 1

    def convert(self, a):
        if isinstance(a, Fraction):
            return a.numerator if a.denominator == 1 else a
        if isinstance(a, int):
            return a
        if isinstance(a, str):
            return self.convert(Fraction(a))
        # numpy integers and the like
        return int(a)

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in QQ")
        return self.convert(Fraction(1) / a)

    def div(self, a, b):
        return self.convert(Fraction(a) / b)

    def neg(self, a):
        return -a

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")


class PrimeField:
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def convert(self, a):
        if isinstance(a, Fraction):
            den = a.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator {a.denominator} vanishes mod {self.p}")
            return a.numerator * pow(den, -1, self.p) % self.p
        return int(a) % self.p

    def inv(self, a):
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero mod {self.p}")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def neg(self, a):
        return -a % self.p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)
