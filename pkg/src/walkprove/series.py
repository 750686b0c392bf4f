"""Truncated series in t whose coefficients are Laurent polynomials in x.

Coefficients live in QQ (object arrays of ints/Fractions) or GF(p) (int64
arrays). Products go through Kronecker substitution, so a bivariate
product costs one big univariate product.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

import numpy as np

from .exactarith import QQ, MultiPoly, PrimeField, mul_mod, mul_z
from .walks import GESSEL, KREWERAS, StepSet


def _is_mod(dom) -> bool:
    return isinstance(dom, PrimeField)


def _dtype(dom):
    return np.int64 if _is_mod(dom) else object


def _mul1d(a: np.ndarray, b: np.ndarray, dom) -> np.ndarray:
    if _is_mod(dom):
        return mul_mod(a, b, dom.p)
    da = db = 1
    for v in a:
        if isinstance(v, Fraction):
            da = lcm(da, v.denominator)
    for v in b:
        if isinstance(v, Fraction):
            db = lcm(db, v.denominator)
    ia = [int(v * da) for v in a]
    ib = [int(v * db) for v in b]
    prod = mul_z(ia, ib)
    den = da * db
    if den == 1:
        return np.array(prod, dtype=object)
    return np.array([QQ.convert(Fraction(v, den)) for v in prod], dtype=object)


class TruncSeries:
    """sum_{k<N} t^k sum_e a[k, e] x^(vmin + e), immutable by convention."""

    __slots__ = ("a", "vmin", "N", "dom")

    def __init__(self, a: np.ndarray, vmin: int, N: int, dom=QQ):
        a = np.asarray(a, dtype=_dtype(dom))
        if a.ndim != 2:
            raise ValueError("coefficient array must be 2-D")
        a = a[:N]
        if a.shape[0] < N:
            a = np.vstack([a, np.zeros((N - a.shape[0], a.shape[1]), dtype=a.dtype)])
        if _is_mod(dom):
            a = a % dom.p
        # trim zero columns on both sides
        nz = np.nonzero(np.any(a != 0, axis=0))[0]
        if nz.size == 0:
            a, vmin = a[:, :0], 0
        else:
            a, vmin = a[:, nz[0]: nz[-1] + 1], vmin + int(nz[0])
        self.a = a
        self.vmin = vmin
        self.N = N
        self.dom = dom

    # ---------------------------------------------------------- constructors

    @classmethod
    def zero(cls, N: int, dom=QQ) -> "TruncSeries":
        return cls(np.zeros((N, 0), dtype=_dtype(dom)), 0, N, dom)

    @classmethod
    def monomial(cls, c, k: int, e: int, N: int, dom=QQ) -> "TruncSeries":
        a = np.zeros((N, 1), dtype=_dtype(dom))
        if k < N:
            a[k, 0] = dom.convert(c)
        return cls(a, e, N, dom)

    @classmethod
    def const(cls, c, N: int, dom=QQ) -> "TruncSeries":
        return cls.monomial(c, 0, 0, N, dom)

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], object], N: int, dom=QQ) -> "TruncSeries":
        """From a map (t-exponent, x-exponent) -> coefficient."""
        terms = {k: v for k, v in terms.items() if k[0] < N and v != 0}
        if not terms:
            return cls.zero(N, dom)
        lo = min(e for _, e in terms)
        hi = max(e for _, e in terms)
        a = np.zeros((N, hi - lo + 1), dtype=_dtype(dom))
        for (k, e), v in terms.items():
            a[k, e - lo] = dom.convert(v)
        return cls(a, lo, N, dom)

    @classmethod
    def from_univariate(cls, coeffs: Sequence, N: int | None = None, dom=QQ) -> "TruncSeries":
        N = len(coeffs) if N is None else N
        a = np.zeros((N, 1), dtype=_dtype(dom))
        for k, v in enumerate(list(coeffs)[:N]):
            a[k, 0] = dom.convert(v)
        return cls(a, 0, N, dom)

    @classmethod
    def from_multipoly(cls, P: MultiPoly, N: int, t: str = "t", x: str = "x", dom=None) -> "TruncSeries":
        dom = P.dom if dom is None else dom
        extra = [g for g in P.free_vars() if g not in (t, x)]
        if extra:
            raise ValueError(f"unexpected variables {extra}")
        ti = P.gens.index(t) if t in P.gens else None
        xi = P.gens.index(x) if x in P.gens else None
        terms: dict = {}
        for e, c in P.terms.items():
            key = (e[ti] if ti is not None else 0, e[xi] if xi is not None else 0)
            terms[key] = terms.get(key, 0) + c
        return cls.from_terms(terms, N, dom)

    @classmethod
    def from_array(cls, arr: np.ndarray, N: int | None = None, dom=QQ) -> "TruncSeries":
        """From a section array c[n, i] (coefficient of t^n x^i)."""
        arr = np.asarray(arr)
        N = arr.shape[0] if N is None else N
        if arr.ndim == 1:
            arr = arr[:, None]
        return cls(arr.astype(_dtype(dom)), 0, N, dom)

    # ---------------------------------------------------------- queries

    @property
    def width(self) -> int:
        return self.a.shape[1]

    def is_zero(self) -> bool:
        return self.width == 0

    def coeff(self, k: int, e: int):
        j = e - self.vmin
        if k >= self.N:
            raise IndexError(f"t^{k} is beyond the truncation order {self.N}")
        if 0 <= j < self.width:
            return self.a[k, j]
        return self.dom.convert(0)

    def row(self, k: int) -> dict[int, object]:
        """Laurent coefficient of t^k as {x-exponent: value}."""
        r = self.a[k]
        return {self.vmin + j: r[j] for j in np.nonzero(r != 0)[0]}

    def t_valuation(self) -> int:
        nz = np.nonzero(np.any(self.a != 0, axis=1))[0]
        return int(nz[0]) if nz.size else self.N

    def x_valuation(self) -> int | None:
        return None if self.is_zero() else self.vmin

    def x_degree(self) -> int | None:
        return None if self.is_zero() else self.vmin + self.width - 1

    def row_valuations(self) -> list[int | None]:
        out = []
        for k in range(self.N):
            nz = np.nonzero(self.a[k] != 0)[0]
            out.append(self.vmin + int(nz[0]) if nz.size else None)
        return out

    def first_difference(self, other: "TruncSeries") -> int:
        """Smallest k where the t^k coefficients differ (min(N) if none)."""
        n = min(self.N, other.N)
        d = self.truncate(n) - other.truncate(n)
        return d.t_valuation()

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.N == other.N and self.dom == other.dom and self.vmin == other.vmin
                and self.a.shape == other.a.shape and bool(np.all(self.a == other.a)))

    def __hash__(self):
        return hash((self.N, self.vmin, self.a.shape))

    # ---------------------------------------------------------- arithmetic

    def _check(self, o: "TruncSeries"):
        if self.dom != o.dom:
            raise ValueError(f"mixed coefficient rings {self.dom!r} and {o.dom!r}")

    def _coerce(self, o) -> "TruncSeries":
        if isinstance(o, TruncSeries):
            self._check(o)
            return o
        return TruncSeries.const(o, self.N, self.dom)

    def truncate(self, N: int) -> "TruncSeries":
        if N > self.N:
            raise ValueError(f"cannot raise the truncation order from {self.N} to {N}")
        return TruncSeries(self.a[:N], self.vmin, N, self.dom)

    def __add__(self, o) -> "TruncSeries":
        o = self._coerce(o)
        N = min(self.N, o.N)
        if self.is_zero():
            return o.truncate(N)
        if o.is_zero():
            return self.truncate(N)
        lo = min(self.vmin, o.vmin)
        hi = max(self.vmin + self.width, o.vmin + o.width)
        a = np.zeros((N, hi - lo), dtype=_dtype(self.dom))
        a[:, self.vmin - lo: self.vmin - lo + self.width] += self.a[:N]
        a[:, o.vmin - lo: o.vmin - lo + o.width] += o.a[:N]
        return TruncSeries(a, lo, N, self.dom)

    __radd__ = __add__

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(-self.a, self.vmin, self.N, self.dom)

    def __sub__(self, o) -> "TruncSeries":
        return self + (-self._coerce(o))

    def __rsub__(self, o) -> "TruncSeries":
        return self._coerce(o) - self

    def scale(self, c) -> "TruncSeries":
        c = self.dom.convert(c)
        return TruncSeries(self.a * c, self.vmin, self.N, self.dom)

    def __mul__(self, o) -> "TruncSeries":
        if not isinstance(o, TruncSeries):
            return self.scale(o)
        self._check(o)
        N = min(self.N, o.N)
        if self.is_zero() or o.is_zero():
            return TruncSeries.zero(N, self.dom)
        va, vb = self.t_valuation(), o.t_valuation()
        if va + vb >= N:
            return TruncSeries.zero(N, self.dom)
        A = self.a[va: N - vb]
        B = o.a[vb: N - va]
        na, wa = A.shape
        nb, wb = B.shape
        W = wa + wb - 1
        dt = _dtype(self.dom)
        fa = np.zeros((na, W), dtype=dt)
        fa[:, :wa] = A
        fb = np.zeros((nb, W), dtype=dt)
        fb[:, :wb] = B
        prod = _mul1d(fa.reshape(-1), fb.reshape(-1), self.dom)
        rows = min(N - va - vb, na + nb - 1)
        need = rows * W
        if prod.shape[0] < need:
            prod = np.concatenate([prod, np.zeros(need - prod.shape[0], dtype=prod.dtype)])
        out = np.zeros((N, W), dtype=dt)
        out[va + vb: va + vb + rows] = prod[:need].reshape(rows, W)
        return TruncSeries(out, self.vmin + o.vmin, N, self.dom)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TruncSeries":
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncSeries.const(1, self.N, self.dom)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift_t(self, k: int) -> "TruncSeries":
        """Multiply by t^k (k may be negative if the division is exact)."""
        if k >= 0:
            a = np.vstack([np.zeros((k, self.width), dtype=self.a.dtype), self.a])[: self.N]
            return TruncSeries(a, self.vmin, self.N, self.dom)
        if self.t_valuation() < -k:
            raise ValueError(f"series is not divisible by t^{-k}")
        a = np.vstack([self.a[-k:], np.zeros((-k, self.width), dtype=self.a.dtype)])
        # the top -k rows are unknown after the division
        return TruncSeries(a, self.vmin, self.N + k, self.dom)

    def shift_x(self, e: int) -> "TruncSeries":
        return TruncSeries(self.a, self.vmin + e, self.N, self.dom)

    def inverse(self) -> "TruncSeries":
        """1/f when the t^0 coefficient is a unit c*x^m of QQ[x, 1/x]."""
        r0 = self.row(0) if self.N else {}
        if len(r0) != 1:
            raise ZeroDivisionError(
                "constant coefficient in t is not a unit of the Laurent polynomial ring")
        (m, c), = r0.items()
        g = TruncSeries.monomial(self.dom.inv(c), 0, -m, self.N, self.dom)
        prec = 1
        while prec < self.N:
            prec = min(2 * prec, self.N)
            f = self.truncate(prec)
            gp = g._widen(prec)
            g = gp + gp * (TruncSeries.const(1, prec, self.dom) - f * gp)
        return g

    def _widen(self, N: int) -> "TruncSeries":
        """Same coefficients viewed at a larger truncation order (padding zeros)."""
        if N <= self.N:
            return self.truncate(N)
        a = np.vstack([self.a, np.zeros((N - self.N, self.width), dtype=self.a.dtype)])
        return TruncSeries(a, self.vmin, N, self.dom)

    def __truediv__(self, o) -> "TruncSeries":
        if isinstance(o, TruncSeries):
            return self * o.inverse()
        return self.scale(self.dom.inv(self.dom.convert(o)))

    def reduce(self, p: int) -> "TruncSeries":
        from .exactarith import GF

        F = GF(p)
        a = np.array([[F.convert(v) for v in row] for row in self.a], dtype=np.int64) \
            if self.width else np.zeros((self.N, 0), dtype=np.int64)
        return TruncSeries(a.reshape(self.N, self.width), self.vmin, self.N, F)

    def eval_x(self, x0) -> list:
        """Specialize x = x0 (x0 must be nonzero when negative exponents occur)."""
        dom = self.dom
        out = [dom.convert(0)] * self.N
        for j in range(self.width):
            e = self.vmin + j
            xe = pow(int(x0), e, dom.p) if _is_mod(dom) else Fraction(x0) ** e
            col = self.a[:, j]
            for k in range(self.N):
                if col[k]:
                    out[k] = dom.convert(out[k] + col[k] * xe)
        return out

    # ---------------------------------------------------------- display

    def to_str(self, x: str = "x", t: str = "t", terms: int | None = None) -> str:
        parts = []
        for k in range(self.N if terms is None else min(terms, self.N)):
            r = self.row(k)
            if not r:
                continue
            c = _laurent_str(r, x)
            tk = "" if k == 0 else (t if k == 1 else f"{t}^{k}")
            if not tk:
                parts.append(c)
            elif c == "1":
                parts.append(tk)
            else:
                parts.append(f"({c})*{tk}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O({t}^{self.N})"

    def __repr__(self) -> str:
        return f"TruncSeries({self.to_str(terms=4)})"


def _laurent_str(r: dict, x: str) -> str:
    out = []
    for e in sorted(r, reverse=True):
        c = r[e]
        mon = "" if e == 0 else (x if e == 1 else f"{x}^{e}" if e > 0 else f"{x}^({e})")
        if not mon:
            out.append(str(c))
        elif c == 1:
            out.append(mon)
        elif c == -1:
            out.append("-" + mon)
        else:
            out.append(f"{c}*{mon}")
    s = " + ".join(out)
    return s.replace("+ -", "- ")


# -------------------------------------------------------------- evaluation


def poly_at(P: MultiPoly, var: str, value: TruncSeries, t: str = "t", x: str = "x") -> TruncSeries:
    """P(value, t, x) for a polynomial P in var and (optionally) t and x."""
    N, dom = value.N, value.dom
    parts = P.coeffs_in(var) if var in P.gens else {0: P}
    if not parts:
        return TruncSeries.zero(N, dom)
    d = max(parts)
    def conv(q):
        if q is None:
            return TruncSeries.zero(N, dom)
        if _is_mod(dom) and q.dom != dom:
            q = q.reduce(dom.p)
        return TruncSeries.from_multipoly(q, N, t, x, dom)
    acc = conv(parts.get(d))
    for k in range(d - 1, -1, -1):
        acc = acc * value + conv(parts.get(k))
    return acc


# -------------------------------------------------------------- Newton lifting


@dataclass(frozen=True)
class AlgebraicSeriesSpec:
    """Branch of P(T, t, x) = 0 fixed by its value at t = 0.

    ``seed`` maps x-exponents to coefficients (an int means a constant).
    """

    poly: MultiPoly
    seed: object = 1
    var: str = "T"
    t: str = "t"
    x: str = "x"

    def seed_terms(self) -> dict[int, object]:
        if isinstance(self.seed, Mapping):
            return dict(self.seed)
        return {0: self.seed}


class SeedError(ValueError):
    pass


def newton_lift(spec: AlgebraicSeriesSpec, N: int, dom=QQ) -> TruncSeries:
    """Root of P(T, t, x) in QQ[x, 1/x][[t]] (or over GF(p)) to order N.

    Requires P(seed, 0, x) = 0 and dP/dT(seed, 0, x) a unit c*x^m; the
    precision doubles at each Newton step.
    """
    P = spec.poly
    if _is_mod(dom) and P.dom != dom:
        P = P.reduce(dom.p)
    PT = P.diff(spec.var)
    seed = TruncSeries.from_terms({(0, e): c for e, c in spec.seed_terms().items()}, 1, dom)
    r0 = poly_at(P, spec.var, seed, spec.t, spec.x)
    if not r0.is_zero():
        raise SeedError("the seed is not a root of P at t = 0")
    d0 = poly_at(PT, spec.var, seed, spec.t, spec.x)
    if d0.is_zero():
        raise SeedError("dP/dT vanishes at the seed: supply a parameterization or deflate the root")
    if len(d0.row(0)) != 1:
        raise SeedError(
            "dP/dT at the seed is not a monomial in x; the root is not determined in "
            "QQ[x, 1/x][[t]] by Newton iteration (supply a parameterization)")
    y = seed
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        y = y._widen(prec)
        f = poly_at(P, spec.var, y, spec.t, spec.x)
        fp = poly_at(PT, spec.var, y, spec.t, spec.x)
        y = y - f * fp.inverse()
    return y if y.N == N else y._widen(N)


# -------------------------------------------------------------- kernel roots


def _kernel_parts(steps: StepSet, along: str):
    """Coefficients A0, A1, A2 (Laurent polys in the other variable, as
    {exponent: coeff}) with x*y*S(x, y) = A0 + A1*u + A2*u^2 in u = y (along
    'y') or u = x (along 'x')."""
    parts = [dict(), dict(), dict()]
    for dx, dy in steps.steps:
        ex, ey = dx + 1, dy + 1
        if along == "y":
            u, other = ey, ex
        else:
            u, other = ex, ey
        parts[u][other] = parts[u].get(other, 0) + 1
    return parts


def kernel_root(steps: StepSet, N: int, along: str = "y", dom=QQ) -> TruncSeries:
    """Series root u(t, v) of the kernel x*y*(1 - t*S(x, y)) in u = y (along='y',
    coefficients Laurent in v = x) or u = x (along='x', Laurent in v = y)."""
    A0, A1, A2 = _kernel_parts(steps, along)
    if not A0:
        raise ValueError("no step decreases the coordinate; the kernel has no small root")
    def lp(d, k):
        return TruncSeries.from_terms({(k, e): c for e, c in d.items()}, N, dom)
    a0, a1, a2 = lp(A0, 1), lp(A1, 1), lp(A2, 1)
    v = TruncSeries.monomial(1, 0, 1, N, dom)
    # F(u) = t*(A0 + A1 u + A2 u^2) - v*u
    u = TruncSeries.zero(1, dom)
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        u = u._widen(prec)
        b0, b1, b2, vv = a0.truncate(prec), a1.truncate(prec), a2.truncate(prec), v.truncate(prec)
        F = b0 + b1 * u + b2 * u * u - vv * u
        Fp = b1 + (b2 * u).scale(2) - vv
        u = u - F * Fp.inverse()
    return u if u.N == N else u._widen(N)


def kernel_root_Y(steps: StepSet, N: int, dom=QQ) -> TruncSeries:
    """Y(t, x): the root of K(x, Y) = 0 with positive t-valuation."""
    return kernel_root(steps, N, "y", dom)


def kernel_root_X(steps: StepSet, N: int, dom=QQ) -> TruncSeries:
    """X(t, y), the root in x; its coefficients are Laurent polynomials in y
    (stored in the x slot of the returned series)."""
    return kernel_root(steps, N, "x", dom)


# -------------------------------------------------------------- composition


def _negative_growth(outer: TruncSeries) -> tuple[Fraction, Fraction]:
    """Affine bound m_k <= s*k + c for the negative x-exponents -m_k of row k,
    fitted on the known rows (slope taken from the upper half)."""
    ms = {k: -v for k, v in enumerate(outer.row_valuations()) if v is not None and v < 0}
    if not ms:
        return Fraction(0), Fraction(0)
    half = outer.N // 2
    tail = [Fraction(m, k) for k, m in ms.items() if k >= max(half, 1)]
    s = max(tail) if tail else Fraction(0)
    c = max(Fraction(m) - s * k for k, m in ms.items())
    return s, max(c, Fraction(0))


def compose(outer: TruncSeries, inner: TruncSeries, N: int | None = None,
            neg_growth: tuple | None = None) -> TruncSeries:
    """outer(t, inner(t, x)): substitute x -> inner, which must have ord_t > 0.

    Negative x-powers of outer need inner's leading coefficient to be a
    Laurent monomial, and an affine bound m <= s*k + c on the exponent -m
    at row k that also covers the unknown rows k >= outer.N (``neg_growth``
    = (s, c); fitted on the known rows when omitted). The result is exact
    to the order where no unknown row can contribute; asking for more
    raises ValueError.
    """
    if outer.dom != inner.dom:
        raise ValueError("mixed coefficient rings")
    dom = outer.dom
    v = inner.t_valuation()
    if v == 0 or inner.is_zero():
        raise ValueError("inner series has t-valuation 0; the substitution is not legitimate")
    limit = min(outer.N, inner.N)
    lo = outer.vmin if not outer.is_zero() else 0
    if lo < 0:
        s, c = (Fraction(neg_growth[0]), Fraction(neg_growth[1])) if neg_growth else \
            _negative_growth(outer)
        if s * v >= 1:
            raise ValueError("negative x-exponents grow too fast for the substitution to converge")
        k = outer.N
        reliable = k - int(-((-(s * k + c)) // 1)) * v  # k - ceil(s*k + c)*v
        limit = min(limit, reliable, inner.N - v)
    if N is None:
        N = limit
    elif N > limit:
        raise ValueError(f"composition is only determined modulo t^{limit}; requested t^{N}")
    result = TruncSeries.zero(N, dom)
    if outer.is_zero():
        return result
    full = inner
    inner = inner.truncate(N)
    hi = outer.vmin + outer.width - 1

    def column(e: int, rows: int) -> TruncSeries:
        col = outer.a[:rows, e - outer.vmin]
        return TruncSeries(col[:, None], 0, rows, dom)

    pw = TruncSeries.const(1, N, dom)
    for e in range(max(lo, 0), hi + 1):
        if e * v >= N:
            break
        if e > 0:
            pw = pw * inner
        c = column(e, N)
        if not c.is_zero():
            result = result + c * pw
    if lo < 0:
        winv = full.shift_t(-v).truncate(N).inverse()
        pw = TruncSeries.const(1, N, dom)
        for m in range(1, -lo + 1):
            pw = pw * winv
            c = column(-m, min(outer.N, N + m * v))
            if c.is_zero():
                continue
            if c.t_valuation() < m * v:
                raise ValueError(
                    f"x^{-m} occurs at t-order {c.t_valuation()} < {m * v}: composition leaves QQ[[t]]")
            result = result + c.shift_t(-m * v)._widen(N) * pw
    return result


def fixed_point_iteration(A: TruncSeries, B: TruncSeries, inner: TruncSeries,
                          start: TruncSeries | None = None, steps: int | None = None):
    """Iterate U <- A + B * U(t, inner); returns (U, agreement orders).

    With ord_t B > 0 each step fixes at least one more t-coefficient, so
    at most N steps reach the unique solution mod t^N.
    """
    N = min(A.N, B.N, inner.N)
    U = TruncSeries.zero(N, A.dom) if start is None else start.truncate(N)
    orders = []
    for _ in range(N + 1 if steps is None else steps):
        nxt = A.truncate(N) + B.truncate(N) * compose(U, inner, N)
        orders.append(nxt.first_difference(U))
        if nxt == U:
            break
        U = nxt
    return U, orders


# -------------------------------------------------------------- parameterizations


def verify_parameterization(R1, R2, h: MultiPoly | None, P: MultiPoly,
                            U: str = "U", x: str = "x", T: str = "T", t: str = "t") -> bool:
    """Check P(R2(U, x), R1(U, x), x) = 0 as an identity of rational functions.

    R1 and R2 are (numerator, denominator) pairs of polynomials in U, x and
    optionally a symbol ``h`` that stands for the polynomial h(U, x). The
    cleared numerator sum_{a,b} c * n2^a d2^(dT-a) n1^b d1^(dt-b) x^k is
    expanded with dense bivariate arithmetic and tested for zero.
    """
    def resolve(q: MultiPoly) -> MultiPoly:
        if "h" in q.free_vars():
            if h is None:
                raise ValueError("expression uses h but no h was given")
            q = q.subs({"h": h.with_gens(q.gens) if set(h.free_vars()) <= set(q.gens) else h})
        return q

    n1, d1 = (resolve(q) for q in R1)
    n2, d2 = (resolve(q) for q in R2)
    for q in (n1, d1, n2, d2):
        extra = [g for g in q.free_vars() if g not in (U, x)]
        if extra:
            raise ValueError(f"parameterization involves unexpected variables {extra}")
    dT, dt = P.degree(T), P.degree(t)
    degs = [max(q.degree(U) if U in q.gens else 0, 0) for q in (n1, d1, n2, d2)]
    bound = dT * max(degs[2], degs[3]) + dt * max(degs[0], degs[1]) + 1
    S = {k: TruncSeries.from_multipoly(q, bound, U, x) for k, q in
         (("n1", n1), ("d1", d1), ("n2", n2), ("d2", d2))}

    def powers(s: TruncSeries, m: int) -> list[TruncSeries]:
        out = [TruncSeries.const(1, bound)]
        for _ in range(m):
            out.append(out[-1] * s)
        return out

    pn1, pd1 = powers(S["n1"], dt), powers(S["d1"], dt)
    pn2, pd2 = powers(S["n2"], dT), powers(S["d2"], dT)
    total = TruncSeries.zero(bound)
    Ti, ti = P.gens.index(T), P.gens.index(t)
    xi = P.gens.index(x) if x in P.gens else None
    cache: dict = {}
    for e, c in P.terms.items():
        a, b = e[Ti], e[ti]
        k = e[xi] if xi is not None else 0
        key = (a, b)
        if key not in cache:
            cache[key] = pn2[a] * pd2[dT - a] * pn1[b] * pd1[dt - b]
        total = total + cache[key].shift_x(k).scale(c)
    return total.is_zero()


def _substitute_h(q: MultiPoly, h: MultiPoly | None) -> MultiPoly:
    if "h" not in q.free_vars():
        return q
    if h is None:
        raise ValueError("expression uses h but no h was given")
    return q.subs({"h": h})


def rational_at(R, value: TruncSeries, h: MultiPoly | None = None, U: str = "U",
                x: str = "x") -> TruncSeries:
    """R(value, x) for R = (numerator, denominator) in U, x (and the symbol h)."""
    num, den = (_substitute_h(q, h) for q in R)
    return poly_at(num, U, value, t="t", x=x) * poly_at(den, U, value, t="t", x=x).inverse()


def parameter_series(R1, h: MultiPoly | None, N: int, U: str = "U", x: str = "x",
                     dom=QQ) -> TruncSeries:
    """The series U0(t, x) with R1(U0, x) = t and U0(0, x) = 0.

    Lifts the polynomial numerator(R1) - t * denominator(R1) from the seed
    U = 0; requires the U-derivative there to be a Laurent monomial.
    """
    num, den = (_substitute_h(q, h) for q in R1)
    t = MultiPoly.var("t", (U, "t", x), num.dom)
    Q = num.with_gens((U, "t", x)) - t * den.with_gens((U, "t", x))
    return newton_lift(AlgebraicSeriesSpec(Q, 0, var=U, t="t", x=x), N, dom)
