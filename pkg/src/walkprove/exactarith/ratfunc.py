"""Univariate rational functions num/den over QQ or GF(p)."""
from __future__ import annotations

from fractions import Fraction

from .dense import DensePoly, poly_gcd
from .domains import QQ


class RatFunc:
    """Reduced fraction with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced: bool = False):
        if not isinstance(num, DensePoly):
            num = DensePoly([num], den.dom if isinstance(den, DensePoly) else QQ)
        dom = num.dom
        if den is None:
            den = DensePoly([1], dom)
        elif not isinstance(den, DensePoly):
            den = DensePoly([den], dom)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = DensePoly([1], dom)
            else:
                if den.degree > 0:
                    g = poly_gcd(num, den)
                    if g.degree > 0:
                        num, den = num // g, den // g
                inv = dom.inv(den.lc())
                if inv != 1:
                    num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def dom(self):
        return self.num.dom

    @classmethod
    def from_poly(cls, p: DensePoly) -> "RatFunc":
        return cls(p, DensePoly([1], p.dom), _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def _coerce(self, o) -> "RatFunc":
        if isinstance(o, RatFunc):
            return o
        if isinstance(o, DensePoly):
            return RatFunc.from_poly(o)
        return RatFunc.from_poly(DensePoly([o], self.dom))

    def __add__(self, o):
        o = self._coerce(o)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc(self.num + o.num, self.den, _reduced=True)
        g = poly_gcd(self.den, o.den)
        if g.degree == 0:
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den, _reduced=False)
        a, b = self.den // g, o.den // g
        return RatFunc(self.num * b + o.num * a, a * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        if self.is_zero() or o.is_zero():
            return RatFunc(DensePoly([], self.dom))
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc(self.num * o.num, self.den, _reduced=True)
        # cross-cancel before multiplying
        g1 = poly_gcd(self.num, o.den)
        g2 = poly_gcd(o.num, self.den)
        n1, d2 = (self.num // g1, o.den // g1) if g1.degree > 0 else (self.num, o.den)
        n2, d1 = (o.num // g2, self.den // g2) if g2.degree > 0 else (o.num, self.den)
        den = d1 * d2
        num = n1 * n2
        inv = self.dom.inv(den.lc())
        return RatFunc(num.scale(inv), den.scale(inv), _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def deriv(self) -> "RatFunc":
        n, d = self.num, self.den
        if d.degree == 0:
            return RatFunc(n.deriv(), d, _reduced=True)
        return RatFunc(n.deriv() * d - n * d.deriv(), d * d)

    def __call__(self, x):
        dv = self.den(x)
        if dv == 0:
            raise ZeroDivisionError("pole of rational function")
        nv = self.num(x)
        return self.dom.div(nv, dv)

    def __eq__(self, o) -> bool:
        if not isinstance(o, RatFunc):
            try:
                o = self._coerce(o)
            except Exception:
                return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def reduce(self, p: int) -> "RatFunc":
        """Reduction mod p of a QQ rational function (den must not vanish)."""
        from .domains import GF

        F = GF(p)
        num = DensePoly(self.num.c, F)
        den = DensePoly(self.den.c, F)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator vanishes mod {p}")
        return RatFunc(num, den)

    def to_str(self, var: str = "t") -> str:
        ns = self.num.to_str(var)
        if self.den.degree == 0 and self.den.lc() == 1:
            return ns
        return f"({ns})/({self.den.to_str(var)})"

    __str__ = to_str

    def __repr__(self) -> str:
        return f"RatFunc({self.to_str()})"


def ratfunc_const(a, dom=QQ) -> RatFunc:
    return RatFunc.from_poly(DensePoly([a], dom))


def common_denominator(fs) -> DensePoly:
    """Monic lcm of the denominators."""
    out = None
    for f in fs:
        d = f.den
        if out is None:
            out = d
        elif d.degree > 0:
            g = poly_gcd(out, d)
            out = out * (d // g)
    return out.monic() if out is not None else DensePoly([1], QQ)


def clear_denominators(fs, dom=None) -> list[DensePoly]:
    """Polynomials proportional to ``fs`` with no common polynomial or integer
    factor; the last nonzero entry gets a positive (or monic) leading term."""
    fs = list(fs)
    L = common_denominator(fs)
    polys = [f.num * (L // f.den) for f in fs]
    g = None
    for q in polys:
        if not q.is_zero():
            g = q if g is None else poly_gcd(g, q)
    if g is not None and g.degree > 0:
        polys = [q // g for q in polys]
    if polys and polys[0].dom == QQ:
        from math import gcd, lcm

        den = 1
        for q in polys:
            for c in q.c:
                if isinstance(c, Fraction):
                    den = lcm(den, c.denominator)
        ints = [[int(c * den) for c in q.c] for q in polys]
        cont = 0
        for cs in ints:
            for c in cs:
                cont = gcd(cont, c)
        cont = cont or 1
        polys = [DensePoly([c // cont for c in cs], QQ) for cs in ints]
    last = next((q for q in reversed(polys) if not q.is_zero()), None)
    if last is not None:
        if last.dom == QQ and last.lc() < 0:
            polys = [-q for q in polys]
        elif last.dom != QQ:
            inv = last.dom.inv(last.lc())
            polys = [q.scale(inv) for q in polys]
    return polys
