"""Dense univariate polynomials over QQ or GF(p)."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .domains import QQ, GF, PrimeField, RationalField
from .polymul import mul_mod, mul_z


def _strip(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _common_denominator(cs: Iterable) -> int:
    d = 1
    for c in cs:
        if isinstance(c, Fraction):
            d = lcm(d, c.denominator)
    return d


class DensePoly:
    """Immutable dense polynomial, coefficients low degree first."""

    __slots__ = ("c", "dom")

    def __init__(self, coeffs: Iterable = (), dom=QQ, _normalized: bool = False):
        self.dom = dom
        if _normalized:
            self.c = coeffs
        else:
            self.c = _strip([dom.convert(a) for a in coeffs])

    # construction helpers
    @classmethod
    def const(cls, a, dom=QQ) -> "DensePoly":
        return cls([a], dom)

    @classmethod
    def gen(cls, dom=QQ) -> "DensePoly":
        return cls([0, 1], dom)

    @classmethod
    def from_roots(cls, roots: Sequence, dom=QQ) -> "DensePoly":
        out = cls([1], dom)
        for r in roots:
            out = out * cls([dom.neg(dom.convert(r)), 1], dom)
        return out

    def _new(self, coeffs: list) -> "DensePoly":
        return DensePoly(_strip(coeffs), self.dom, _normalized=True)

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lc(self):
        return self.c[-1] if self.c else 0

    def coeff(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def valuation(self) -> int:
        for i, a in enumerate(self.c):
            if a != 0:
                return i
        return -1

    def __len__(self) -> int:
        return len(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, DensePoly):
            return self.c == other.c and self.dom == other.dom
        if isinstance(other, (int, Fraction)):
            return self.c == _strip([self.dom.convert(other)])
        return NotImplemented

    def __hash__(self) -> int:
        return hash((tuple(self.c), self.dom))

    def __repr__(self) -> str:
        return f"DensePoly({self.c}, {self.dom!r})"

    def to_str(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if a == 0:
                continue
            mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            parts.append(_term(a, mon))
        return _join(parts)

    __str__ = to_str

    # arithmetic
    def _coerce(self, other) -> "DensePoly":
        if isinstance(other, DensePoly):
            if other.dom != self.dom:
                raise TypeError(f"domain mismatch {self.dom} vs {other.dom}")
            return other
        return DensePoly([other], self.dom)

    def __add__(self, other):
        o = self._coerce(other)
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        if isinstance(self.dom, PrimeField):
            p = self.dom.p
            out = [x % p for x in out]
        else:
            out = [QQ.convert(x) for x in out]
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new([self.dom.neg(x) for x in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, a) -> "DensePoly":
        a = self.dom.convert(a)
        if a == 0:
            return self._new([])
        if isinstance(self.dom, PrimeField):
            p = self.dom.p
            return self._new([x * a % p for x in self.c])
        return self._new([QQ.convert(x * a) for x in self.c])

    def __mul__(self, other):
        if not isinstance(other, DensePoly):
            return self.scale(other)
        o = self._coerce(other)
        if not self.c or not o.c:
            return self._new([])
        if isinstance(self.dom, PrimeField):
            return self._new([int(v) for v in mul_mod(self.c, o.c, self.dom.p)])
        da = _common_denominator(self.c)
        db = _common_denominator(o.c)
        A = self.c if da == 1 else [int(x * da) for x in self.c]
        B = o.c if db == 1 else [int(x * db) for x in o.c]
        prod = mul_z(A, B)
        d = da * db
        if d == 1:
            return self._new(prod)
        return self._new([QQ.convert(Fraction(x, d)) for x in prod])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = DensePoly([1], self.dom)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __divmod__(self, other):
        o = self._coerce(other)
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        dom = self.dom
        r = list(self.c)
        dq = len(r) - len(o.c)
        if dq < 0:
            return self._new([]), self
        inv = dom.inv(o.c[-1])
        q = [0] * (dq + 1)
        m = len(o.c) - 1
        b = o.c
        if isinstance(dom, PrimeField):
            p = dom.p
            for k in range(dq, -1, -1):
                coef = r[k + m] * inv % p
                q[k] = coef
                if coef:
                    for j in range(m + 1):
                        r[k + j] = (r[k + j] - coef * b[j]) % p
        else:
            for k in range(dq, -1, -1):
                coef = QQ.convert(r[k + m] * inv)
                q[k] = coef
                if coef:
                    for j in range(m + 1):
                        r[k + j] = QQ.convert(r[k + j] - coef * b[j])
        return self._new(q), self._new(r[:m])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other) -> "DensePoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __call__(self, x):
        """Horner evaluation; ``x`` may be a scalar or a DensePoly."""
        if isinstance(x, DensePoly):
            out = DensePoly([], self.dom)
            for a in reversed(self.c):
                out = out * x + a
            return out
        dom = self.dom
        acc = 0
        if isinstance(dom, PrimeField):
            p = dom.p
            x = dom.convert(x)
            for a in reversed(self.c):
                acc = (acc * x + a) % p
            return acc
        for a in reversed(self.c):
            acc = acc * x + a
        return QQ.convert(acc) if isinstance(acc, (int, Fraction)) else acc

    def deriv(self) -> "DensePoly":
        return DensePoly([i * a for i, a in enumerate(self.c)][1:], self.dom)

    def shift(self, k: int) -> "DensePoly":
        """Multiply by ``var^k`` (k >= 0) or drop the low ``-k`` coefficients."""
        if not self.c:
            return self
        if k >= 0:
            return self._new([0] * k + list(self.c))
        return self._new(list(self.c[-k:]))

    def truncate(self, n: int) -> "DensePoly":
        return self._new(list(self.c[:n]))

    def monic(self) -> "DensePoly":
        if not self.c:
            return self
        return self.scale(self.dom.inv(self.lc()))

    def reduce(self, p: int) -> "DensePoly":
        return DensePoly(self.c, GF(p))

    # content over QQ
    def content(self):
        """Positive rational content (QQ only): self = content * primitive."""
        if not self.c:
            return 0
        d = _common_denominator(self.c)
        g = 0
        for x in self.c:
            g = gcd(g, int(x * d))
        return Fraction(g, d) if d != 1 else g

    def primitive(self) -> "DensePoly":
        """Integer primitive part with positive leading coefficient (QQ),
        monic polynomial (GF(p))."""
        if not self.c:
            return self
        if isinstance(self.dom, PrimeField):
            return self.monic()
        c = self.content()
        if self.lc() < 0:
            c = -c
        return self._new([QQ.convert(Fraction(x) / c) for x in self.c])


def _term(a, mon: str) -> str:
    if mon == "":
        return str(a)
    if a == 1:
        return mon
    if a == -1:
        return "-" + mon
    s = str(a)
    if isinstance(a, Fraction):
        s = f"({s})" if "/" in s else s
    return f"{s}*{mon}"


def _join(parts: list[str]) -> str:
    out = parts[0]
    for s in parts[1:]:
        out += (" - " + s[1:]) if s.startswith("-") else (" + " + s)
    return out


# ------------------------------------------------------------ gcd & friends


def _euclid_gcd(a: DensePoly, b: DensePoly) -> DensePoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _modular_gcd_qq(a: DensePoly, b: DensePoly) -> DensePoly:
    from .primes import prime_pool

    A = a.primitive()
    B = b.primitive()
    la, lb = int(A.lc()), int(B.lc())
    gl = gcd(la, lb)
    bound_deg = min(A.degree, B.degree)
    primes = prime_pool(64, bits=31)
    acc = None
    mod = 1
    deg = None
    for p in primes:
        if la % p == 0 or lb % p == 0:
            continue
        gp = _euclid_gcd(A.reduce(p), B.reduce(p))
        d = gp.degree
        if d == 0:
            return DensePoly([1], QQ)
        if deg is None or d < deg:
            deg, acc, mod = d, None, 1
        if d > deg:
            continue  # unlucky prime
        vals = [x * gl % p for x in gp.c]
        if acc is None:
            acc, mod = vals, p
        else:
            from .recon import crt_pair

            acc = [crt_pair(u, mod, v, p) for u, v in zip(acc, vals)]
            mod *= p
        cand = DensePoly([_sym(x, mod) for x in acc], QQ).primitive()
        if cand.degree <= bound_deg and (A % cand).is_zero() and (B % cand).is_zero():
            return cand.monic()
    return _euclid_gcd(a, b)


def _sym(x: int, m: int) -> int:
    x %= m
    return x - m if x > m // 2 else x


def poly_gcd(a: DensePoly, b: DensePoly) -> DensePoly:
    """Monic gcd (zero if both are zero)."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if isinstance(a.dom, RationalField) and a.degree > 2 and b.degree > 2:
        return _modular_gcd_qq(a, b)
    return _euclid_gcd(a, b)


def poly_xgcd(a: DensePoly, b: DensePoly):
    """Return (g, s, t) with s*a + t*b = g monic."""
    dom = a.dom
    r0, r1 = a, b
    s0, s1 = DensePoly([1], dom), DensePoly([], dom)
    t0, t1 = DensePoly([], dom), DensePoly([1], dom)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = dom.inv(r0.lc())
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_resultant(a: DensePoly, b: DensePoly) -> object:
    """Resultant of two univariate polynomials over a field (Euclid)."""
    dom = a.dom
    if a.is_zero() or b.is_zero():
        return 0
    m, n = a.degree, b.degree
    sign = 1
    res = dom.one
    while True:
        if n == 0:
            val = _fpow(b.lc(), m, dom) if m > 0 else dom.one
            return _fmul(_fmul(res, val, dom), sign, dom)
        r = a % b
        if r.is_zero():
            return 0
        k = r.degree
        if (m * n) % 2 == 1:
            sign = -sign
        res = _fmul(res, _fpow(b.lc(), m - k, dom), dom)
        a, b, m, n = b, r, n, k


def _fmul(x, y, dom):
    if isinstance(dom, PrimeField):
        return x * y % dom.p
    return QQ.convert(x * y)


def _fpow(x, e, dom):
    if isinstance(dom, PrimeField):
        return pow(x, e, dom.p)
    return QQ.convert(Fraction(x) ** e)


def interpolate(xs: Sequence, ys: Sequence, dom=QQ) -> DensePoly:
    """Newton interpolation through the points (xs[i], ys[i])."""
    n = len(xs)
    xs = [dom.convert(x) for x in xs]
    coef = [dom.convert(y) for y in ys]
    if isinstance(dom, PrimeField):
        p = dom.p
        for j in range(1, n):
            for i in range(n - 1, j - 1, -1):
                den = (xs[i] - xs[i - j]) % p
                coef[i] = (coef[i] - coef[i - 1]) * pow(den, -1, p) % p
    else:
        for j in range(1, n):
            for i in range(n - 1, j - 1, -1):
                coef[i] = QQ.convert(Fraction(coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]))
    out = DensePoly([coef[-1]] if n else [], dom)
    for i in range(n - 2, -1, -1):
        out = out * DensePoly([dom.neg(xs[i]), 1], dom) + coef[i]
    return out
