"""Linear differential operators sum a_i(t) Dt^i over QQ(t) or GF(p)(t).

Includes right division and gcrd, p-curvature tests (two independent
routes), conversion of an algebraic equation into a differential equation
and of a differential equation into a recurrence on Taylor coefficients.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Sequence

import numpy as np

from .exactarith import GF, QQ, DensePoly, MultiPoly, PrimeField, RatFunc
from .exactarith.dense import poly_gcd
from .exactarith.polymul import mul_mod
from .exactarith.ratfunc import clear_denominators
from .exactarith.recon import rat_interp_adaptive

log = logging.getLogger(__name__)


def _rf_zero(dom) -> RatFunc:
    return RatFunc(DensePoly([], dom), _reduced=True)


def _to_rf(c, dom) -> RatFunc:
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, DensePoly):
        return RatFunc.from_poly(c)
    return RatFunc.from_poly(DensePoly([c], dom))


class OreOperator:
    """Differential operator with rational-function coefficients, a_0 first."""

    __slots__ = ("coeffs", "_dom")

    def __init__(self, coeffs: Sequence, dom=None):
        if dom is None:
            dom = next((c.dom for c in coeffs if isinstance(c, (RatFunc, DensePoly))), QQ)
        cs = [_to_rf(c, dom) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = cs if cs else []
        self._dom = dom if not cs else cs[0].dom

    @property
    def dom(self):
        return self._dom

    @classmethod
    def D(cls, dom=QQ) -> "OreOperator":
        return cls([0, 1], dom)

    @classmethod
    def from_polys(cls, polys: Sequence[DensePoly]) -> "OreOperator":
        dom = polys[0].dom if polys else QQ
        return cls([RatFunc.from_poly(q) for q in polys], dom)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> RatFunc:
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, OreOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __add__(self, other: "OreOperator") -> "OreOperator":
        n = max(len(self.coeffs), len(other.coeffs))
        z = _rf_zero(self.dom)
        a = self.coeffs + [z] * (n - len(self.coeffs))
        b = other.coeffs + [z] * (n - len(other.coeffs))
        return OreOperator([x + y for x, y in zip(a, b)], self.dom)

    def __neg__(self):
        return OreOperator([-c for c in self.coeffs], self.dom)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, OreOperator):
            return ore_mul(self, other)
        c = _to_rf(other, self.dom)
        return OreOperator([c * a for a in self.coeffs], self.dom)

    def __rmul__(self, other):
        c = _to_rf(other, self.dom)
        return OreOperator([c * a for a in self.coeffs], self.dom)

    def monic(self) -> "OreOperator":
        if self.is_zero():
            return self
        inv = self.lc().inverse()
        return OreOperator([inv * c for c in self.coeffs], self.dom)

    def poly_coeffs(self) -> list[DensePoly]:
        """Content-free polynomial coefficients of a left multiple by a rational
        function (integer-primitive and positive over QQ, monic over GF(p))."""
        if self.is_zero():
            return []
        return clear_denominators(self.coeffs)

    def normalized(self) -> "OreOperator":
        return OreOperator.from_polys(self.poly_coeffs())

    def equal_up_to_unit(self, other: "OreOperator") -> bool:
        return self.normalized() == other.normalized()

    def max_degree(self) -> int:
        return max(q.degree for q in self.poly_coeffs())

    def reduce(self, p: int) -> "OreOperator":
        """Reduction mod p of the normalized polynomial form."""
        polys = self.poly_coeffs()
        F = GF(p)
        red = [DensePoly(q.c, F) for q in polys]
        if red[-1].is_zero():
            raise ArithmeticError(f"leading coefficient vanishes mod {p}")
        return OreOperator.from_polys(red)

    def to_str(self, var: str = "t") -> str:
        polys = self.poly_coeffs()
        parts = []
        for i, q in enumerate(polys):
            if q.is_zero():
                continue
            dpart = "" if i == 0 else ("Dt" if i == 1 else f"Dt^{i}")
            s = q.to_str(var)
            nterms = sum(1 for c in q.c if c != 0)
            if not dpart:
                parts.append(s if nterms == 1 else f"({s})")
            elif s == "1":
                parts.append(dpart)
            elif s == "-1":
                parts.append("-" + dpart)
            elif nterms == 1:
                parts.append(f"{s}*{dpart}")
            else:
                parts.append(f"({s})*{dpart}")
        if not parts:
            return "0"
        out = parts[0]
        for s in parts[1:]:
            out += (" - " + s[1:]) if s.startswith("-") else (" + " + s)
        return out

    __str__ = to_str

    def __repr__(self) -> str:
        return f"OreOperator({self.to_str()!r})"

    @classmethod
    def parse(cls, text: str, dom=QQ, var: str = "t") -> "OreOperator":
        """Parse ``a0(t) + a1(t)*Dt + ... + ar(t)*Dt^r``.

        Terms are read in normal form: the polynomial in t stands to the left
        of the power of Dt.
        """
        P = MultiPoly.parse(text, ("Dt", var), dom)
        parts = P.coeffs_in("Dt")
        if not parts:
            raise ValueError("zero operator")
        r = max(parts)
        polys = []
        for i in range(r + 1):
            q = parts.get(i)
            if q is None:
                polys.append(DensePoly([], dom))
                continue
            deg = q.degree(var)
            cs = [0] * (deg + 1)
            for e, c in q.terms.items():
                cs[e[1]] = c
            polys.append(DensePoly(cs, dom))
        return cls.from_polys(polys)

    def apply_series(self, f: Sequence, N: int | None = None) -> list:
        """Coefficients of L(f) for a truncated power series f (list of
        coefficients). Uses the normalized polynomial form, so the result is
        L(f) up to a rational left factor; valid on len(f) - order terms."""
        polys = self.poly_coeffs()
        dom = self.dom
        r = len(polys) - 1
        n = len(f) - r if N is None else N
        if n > len(f) - r:
            raise ValueError("series too short for the requested number of terms")
        deriv = [dom.convert(c) for c in f]
        out = [0] * n
        for i, q in enumerate(polys):
            if i:
                deriv = [dom.convert(k * deriv[k]) for k in range(1, len(deriv))]
            for a, c in enumerate(q.c):
                if c == 0:
                    continue
                for k in range(a, n):
                    if k - a < len(deriv):
                        out[k] += c * deriv[k - a]
        return [dom.convert(v) for v in out]


def ore_mul(L1: OreOperator, L2: OreOperator) -> OreOperator:
    """Product with the rule Dt * a(t) = a(t) * Dt + a'(t)."""
    dom = L1.dom
    if L1.is_zero() or L2.is_zero():
        return OreOperator([], dom)
    z = _rf_zero(dom)
    res = [z] * (L1.order + L2.order + 1)
    cur = list(L2.coeffs)
    for i, a in enumerate(L1.coeffs):
        if i:
            cur = _d_times(cur, z)
        if not a.is_zero():
            for j, c in enumerate(cur):
                if not c.is_zero():
                    res[j] = res[j] + a * c
    return OreOperator(res, dom)


def _d_times(cs: list[RatFunc], z: RatFunc) -> list[RatFunc]:
    """Coefficients of Dt * (sum c_j Dt^j)."""
    out = [c.deriv() for c in cs] + [z]
    for j, c in enumerate(cs):
        out[j + 1] = out[j + 1] + c
    return out


def right_divide(L: OreOperator, M: OreOperator) -> tuple[OreOperator, OreOperator]:
    """Return (Q, R) with L = Q*M + R and order(R) < order(M)."""
    if M.is_zero():
        raise ZeroDivisionError("right division by the zero operator")
    dom = L.dom
    z = _rf_zero(dom)
    R = list(L.coeffs)
    rm = M.order
    dq = L.order - rm
    if dq < 0:
        return OreOperator([], dom), L
    multiples = [list(M.coeffs)]
    for _ in range(dq):
        multiples.append(_d_times(multiples[-1], z))
    inv = M.lc().inverse()
    Q = [z] * (dq + 1)
    while len(R) - 1 >= rm:
        k = len(R) - 1 - rm
        q = R[-1] * inv
        Q[k] = q
        DkM = multiples[k]
        for j, c in enumerate(DkM):
            if not c.is_zero():
                R[j] = R[j] - q * c
        R[-1] = z  # exact cancellation of the leading term
        while R and R[-1].is_zero():
            R.pop()
    return OreOperator(Q, dom), OreOperator(R, dom)


def gcrd(L1: OreOperator, L2: OreOperator) -> OreOperator:
    """Monic greatest common right divisor by the Euclidean algorithm."""
    a, b = L1, L2
    while not b.is_zero():
        a, b = b, right_divide(a, b)[1]
    return a.monic()


def lclm_order(L1: OreOperator, L2: OreOperator) -> int:
    return L1.order + L2.order - gcrd(L1, L2).order


# ------------------------------------------------------------ modular gcrd


def _poly_rows_d_times(polys: list[list[int]], p: int) -> list[list[int]]:
    """Dt * (sum b_k Dt^k) with polynomial coefficient lists mod p."""
    out = [[(i * c) % p for i, c in enumerate(b)][1:] for b in polys] + [[]]
    for k, b in enumerate(polys):
        nxt = out[k + 1]
        if len(nxt) < len(b):
            nxt = nxt + [0] * (len(b) - len(nxt))
        out[k + 1] = [(x + (b[i] if i < len(b) else 0)) % p for i, x in enumerate(nxt)]
    return out


def _rref_last_row(A: np.ndarray, p: int):
    """Rank of A mod p and the last nonzero row of its reduced echelon form."""
    A = A.copy() % p
    nrows, ncols = A.shape
    r = 0
    pivots = []
    for c in range(ncols):
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - (col[nzr, None] * A[r][None, :]) % p) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return r, (A[r - 1] if r else None), pivots


def gcrd_mod_p(ops: Sequence[OreOperator], p: int, max_points: int = 4096,
               rng: random.Random | None = None) -> OreOperator:
    """gcrd of operators with polynomial coefficients over GF(p).

    Evaluates the Ore-Sylvester matrix of each pair at points t0, reads the
    monic gcrd at t0 from the reduced echelon form, and interpolates each
    coefficient as a rational function of t (adaptively adding points until
    every coefficient reconstructs and survives the check points).
    """
    ops = [o for o in ops if not o.is_zero()]
    if not ops:
        raise ValueError("need at least one nonzero operator")
    g = ops[0]
    for L in ops[1:]:
        h = _gcrd_pair_mod_p(g, L, p, max_points, rng)
        if h.order == g.order and h.equal_up_to_unit(g):
            continue
        g = h
        if g.order == 0:
            break
    return g.normalized()


def _gcrd_pair_mod_p(L1: OreOperator, L2: OreOperator, p: int, max_points: int,
                     rng: random.Random | None) -> OreOperator:
    F = GF(p)
    rng = rng or random.Random(1)
    a = [[int(c) for c in q.c] for q in L1.poly_coeffs()]
    b = [[int(c) for c in q.c] for q in L2.poly_coeffs()]
    r1, r2 = len(a) - 1, len(b) - 1
    size = r1 + r2
    rows = []
    cur = a
    for i in range(r2):
        rows.append(cur)
        cur = _poly_rows_d_times(cur, p)
    cur = b
    for j in range(r1):
        rows.append(cur)
        cur = _poly_rows_d_times(cur, p)
    maxdeg = max(len(c) for row in rows for c in row)
    # tensor C[row, col, k], columns ordered Dt^{size-1} ... Dt^0
    C = np.zeros((size, size, max(maxdeg, 1)), dtype=np.int64)
    for i, row in enumerate(rows):
        for k, coef in enumerate(row):
            if coef:
                C[i, size - 1 - k, : len(coef)] = coef
    if size == 0:
        return OreOperator([1], F)

    def eval_at(points: np.ndarray) -> np.ndarray:
        acc = np.broadcast_to(C[..., -1:], (size, size, points.size)).copy()
        for k in range(C.shape[2] - 2, -1, -1):
            acc = (acc * points[None, None, :] + C[..., k:k + 1]) % p
        return acc

    used: list[int] = []
    vals: list[np.ndarray] = []
    best_rank = -1
    npts = 32
    seen: set[int] = set()
    while True:
        fresh = []
        while len(fresh) < npts - len(used):
            t0 = rng.randrange(1, p)
            if t0 not in seen:
                seen.add(t0)
                fresh.append(t0)
        E = eval_at(np.array(fresh, dtype=np.int64))
        for idx, t0 in enumerate(fresh):
            rank, last, pivots = _rref_last_row(E[:, :, idx], p)
            if rank < best_rank:
                continue
            if rank > best_rank:
                best_rank = rank
                used, vals = [], []
            used.append(t0)
            vals.append(last)
        gord = size - best_rank
        if gord == 0:
            return OreOperator([1], F)
        # coefficients of Dt^{gord-1} .. Dt^0 sit in the last gord columns
        cols = list(range(size - gord, size))
        recon = []
        ok = True
        for c in cols:
            ys = [int(v[c]) for v in vals]
            rr = rat_interp_adaptive(used, ys, p, check=4)
            if rr is None:
                ok = False
                break
            n, d = rr
            # demand a margin: the reconstruction must use < (points - 8)
            if max(n.degree, 0) + d.degree + 8 > len(used):
                ok = False
                break
            recon.append(RatFunc(n, d))
        if ok:
            coeffs = list(reversed(recon)) + [RatFunc.from_poly(DensePoly([1], F))]
            return OreOperator(coeffs, F).normalized()
        if npts >= max_points:
            raise ArithmeticError(f"gcrd reconstruction needs more than {max_points} points")
        npts *= 2


# ------------------------------------------------------------ p-curvature


class BadReduction(ArithmeticError):
    pass


def _mod_p_polys(L: OreOperator, p: int) -> list[np.ndarray]:
    if isinstance(L.dom, PrimeField):
        if L.dom.p != p:
            raise ValueError(f"operator lives mod {L.dom.p}, not mod {p}")
        polys = L.poly_coeffs()
        return [np.array(q.c, dtype=np.int64) for q in polys]
    polys = L.poly_coeffs()
    red = [np.array([int(c) % p for c in q.c], dtype=np.int64) for q in polys]
    red = [np.trim_zeros(a, "b") for a in red]
    if red[-1].size == 0:
        raise BadReduction(f"leading coefficient vanishes mod {p}")
    return red


def _padd(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.size < b.size:
        a, b = b, a
    out = a.copy()
    out[: b.size] = (out[: b.size] + b) % p
    return out


def _pderiv(a: np.ndarray, p: int) -> np.ndarray:
    if a.size <= 1:
        return np.zeros(0, dtype=np.int64)
    return a[1:] * (np.arange(1, a.size, dtype=np.int64) % p) % p


def _pmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    return mul_mod(a, b, p)


def dpow_remainders(L: OreOperator, p: int, upto: int):
    """Yield (k, m, B) for k = r .. upto where rem(Dt^k, L) = sum_i B_i/l^m Dt^i
    with l the leading coefficient of L (numerators as int64 arrays mod p)."""
    polys = _mod_p_polys(L, p)
    r = len(polys) - 1
    if r < 1:
        raise ValueError("operator of order >= 1 required")
    l = polys[-1]
    dl = _pderiv(l, p)
    B = [(-q) % p for q in polys[:-1]]
    m = 1
    k = r
    yield k, m, B
    while k < upto:
        top = B[-1]
        new = []
        for i in range(r):
            term = _padd(_pmul(_pderiv(B[i], p), l, p), (-(m % p) * _pmul(dl, B[i], p)) % p, p)
            if i:
                term = _padd(term, _pmul(B[i - 1], l, p), p)
            term = _padd(term, (-_pmul(top, polys[i], p)) % p, p)
            new.append(np.trim_zeros(term, "b"))
        B = new
        m += 1
        k += 1
        yield k, m, B


def p_curvature_zero(L: OreOperator, p: int) -> bool:
    """True iff L right-divides Dt^p over GF(p)(t) (iterated multiplication)."""
    r = L.order
    if r < 1:
        raise ValueError("operator of order >= 1 required")
    if p < r:
        return False  # Dt^p is its own nonzero remainder
    if p == r:
        # remainder Dt^p - L/lc is zero only if L = lc * Dt^p
        polys = _mod_p_polys(L, p)
        return all(q.size == 0 or not q.any() for q in polys[:-1])
    for k, m, B in dpow_remainders(L, p, p):
        if k == p:
            return all(b.size == 0 or not b.any() for b in B)
    raise AssertionError("unreachable")


def dpow_remainder_binary(L: OreOperator, n: int) -> OreOperator:
    """rem(Dt^n, L) by binary powering: rem(D^(2k)) = rem(D^k * rem(D^k)).

    Works with exact rational-function coefficients; independent of the
    iterated numerator recurrence used by ``p_curvature_zero``.
    """
    dom = L.dom
    if n < 0:
        raise ValueError("n must be non-negative")
    R = right_divide(OreOperator([1], dom), L)[1]
    k = 0
    for bit in bin(n)[2:]:
        if k:
            R = right_divide(_leibniz_dpow_times(k, R), L)[1]
            k *= 2
        if bit == "1":
            R = right_divide(ore_mul(OreOperator.D(dom), R), L)[1]
            k += 1
    return R


def _leibniz_dpow_times(k: int, R: OreOperator) -> OreOperator:
    """Dt^k * R = sum_i sum_j C(k, j) b_i^(j) Dt^(k-j+i)."""
    dom = R.dom
    z = _rf_zero(dom)
    out = [z] * (k + R.order + 1)
    for i, b in enumerate(R.coeffs):
        der = b
        for j in range(k + 1):
            if der.is_zero():
                break
            c = comb(k, j)
            if isinstance(dom, PrimeField):
                c %= dom.p
            if c:
                out[k - j + i] = out[k - j + i] + der * c
            der = der.deriv()
    return OreOperator(out, dom)


def p_curvature_zero_binary(L: OreOperator, p: int) -> bool:
    Lp = L if isinstance(L.dom, PrimeField) else L.reduce(p)
    return dpow_remainder_binary(Lp, p).is_zero()


def p_curvature_matrix(L: OreOperator, p: int) -> list[list[RatFunc]]:
    """Matrix over GF(p)(t) of left multiplication by Dt^p on the module
    GF(p)(t)[Dt]/GF(p)(t)[Dt]L in the basis 1, Dt, ..., Dt^(r-1); column j is
    rem(Dt^(p+j))."""
    F = GF(p)
    r = L.order
    polys = _mod_p_polys(L, p)
    lpoly = DensePoly([int(c) for c in polys[-1]], F)
    cols = []
    if p < r:
        # rem(Dt^k) = Dt^k for k < r
        pass
    for j in range(r):
        k = p + j
        if k < r:
            col = [RatFunc.from_poly(DensePoly([1 if i == k else 0], F)) for i in range(r)]
            cols.append(col)
    start = len(cols)
    if start < r:
        for k, m, B in dpow_remainders(L, p, p + r - 1):
            if k >= p + start:
                den = lpoly ** m
                cols.append([RatFunc(DensePoly([int(c) for c in b], F), den) for b in B])
    return [[cols[j][i] for j in range(r)] for i in range(r)]


def global_nilpotency_check(L: OreOperator, p: int) -> bool:
    """True iff L right-divides Dt^(r*p), r = order(L)."""
    if p_curvature_zero(L, p):
        return True
    A = p_curvature_matrix(L, p)
    r = L.order
    F = GF(p)
    # rem(Dt^(k p)) = A^k e_0 because Dt^p is central mod p
    v = [RatFunc.from_poly(DensePoly([1 if i == 0 else 0], F)) for i in range(r)]
    for _ in range(r):
        v = [sum((A[i][j] * v[j] for j in range(r) if not v[j].is_zero()), _rf_zero(F))
             for i in range(r)]
        if all(c.is_zero() for c in v):
            return True
    return all(c.is_zero() for c in v)


# ------------------------------------------------------------ recurrences


@dataclass
class PRecurrence:
    """sum_i c_i(n) u_{n+i} = 0, valid for n >= start (c_i in QQ[n])."""

    coeffs: list[DensePoly]
    start: int = 0
    singular: list[int] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff_at(self, i: int, n: int):
        return self.coeffs[i](n)

    def normalized(self) -> "PRecurrence":
        return _normalize_rec(self.coeffs, self.start)

    def equal_up_to_unit(self, other: "PRecurrence") -> bool:
        return self.normalized().coeffs == other.normalized().coeffs

    def check(self, u: Sequence, upto: int | None = None) -> bool:
        s = self.order
        upto = len(u) - s if upto is None else upto
        for n in range(self.start, upto):
            acc = sum(self.coeffs[i](n) * u[n + i] for i in range(s + 1))
            if acc != 0 and n not in self.singular:
                return False
        return True

    def to_str(self, name: str = "u") -> str:
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c.is_zero():
                continue
            idx = "n" if i == 0 else f"n + {i}"
            sign, body = _factored(c)
            parts.append((sign, f"{body}{name}_{{{idx}}}" if body else f"{name}_{{{idx}}}"))
        if not parts:
            return "0 = 0"
        out = ("-" if parts[0][0] < 0 else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += (" - " if sign < 0 else " + ") + body
        return out + " = 0"

    __str__ = to_str


def _factored(c: DensePoly) -> tuple[int, str]:
    """Sign and a factored rendering '(n + 2) (3 n + 5) ' of an integer poly."""
    cont = c.content()
    prim = c.primitive()
    sign = 1 if c.lc() > 0 else -1
    factors = []
    rest = prim
    for root in _rational_roots(prim):
        lin = DensePoly([-root.numerator, root.denominator])
        while True:
            q, r = divmod(rest, lin)
            if not r.is_zero():
                break
            factors.append(lin)
            rest = q
    body = ""
    k = Fraction(cont) * Fraction(rest.lc() if rest.degree == 0 else 1)
    if rest.degree > 0:
        factors.append(rest)
    if k != 1 or not factors:
        body += f"{k} "
    for f in factors:
        body += f"({f.to_str('n').replace('*', ' ')}) "
    return sign, body


def _rational_roots(q: DensePoly) -> list[Fraction]:
    if q.degree < 1:
        return []
    cs = [int(c) for c in q.c]
    v = next(i for i, c in enumerate(cs) if c)
    roots = [Fraction(0)] if v else []
    cs = cs[v:]
    a0, an = abs(cs[0]), abs(cs[-1])
    if a0 > 10**8 or an > 10**8:
        return roots
    def divisors(m):
        return [d for d in range(1, m + 1) if m % d == 0]
    seen = set()
    for num in divisors(a0):
        for den in divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, den)
                if r not in seen and DensePoly(cs)(r) == 0:
                    seen.add(r)
                    roots.append(r)
    return sorted(roots, key=lambda r: (r.denominator, -r))


def _normalize_rec(coeffs: list[DensePoly], start: int) -> PRecurrence:
    cs = list(coeffs)
    while cs and cs[-1].is_zero():
        cs.pop()
    lead_zero = 0
    while cs and cs[0].is_zero():
        cs.pop(0)
        lead_zero += 1
    if lead_zero:
        # u_{n+lead_zero+i}: rename n -> n - lead_zero
        cs = [c(DensePoly([-lead_zero, 1])) for c in cs]
        start += lead_zero
    if not cs:
        raise ValueError("zero recurrence")
    g = None
    for c in cs:
        g = c if g is None else poly_gcd(g, c)
    singular = []
    if g is not None and g.degree > 0:
        cs = [c // g for c in cs]
        singular = [int(r) for r in _rational_roots(g.primitive())
                    if r.denominator == 1 and r >= start]
    polys = clear_denominators([RatFunc.from_poly(c) for c in cs])
    return PRecurrence(polys, start, sorted(singular))


def diffeq_to_rec(L: OreOperator) -> PRecurrence:
    """Recurrence satisfied by the Taylor coefficients of any power-series
    solution of L: t^a Dt^i acts on u_n as (n-a+1)...(n-a+i) u_{n-a+i}."""
    polys = L.poly_coeffs()
    if not polys:
        raise ValueError("zero operator")
    terms = []  # (shift s = i - a, i, a, c)
    for i, q in enumerate(polys):
        for a, c in enumerate(q.c):
            if c != 0:
                terms.append((i - a, i, a, c))
    smin = min(s for s, *_ in terms)
    smax = max(s for s, *_ in terms)
    coeffs = [DensePoly([], QQ) for _ in range(smax - smin + 1)]
    n = DensePoly([0, 1], QQ)
    for s, i, a, c in terms:
        # coefficient of u_{n'+j}, n' = n + smin, j = s - smin, written in n'
        base = n + (-smin - a + 1)
        poly = DensePoly([Fraction(c)], QQ)
        for k in range(i):
            poly = poly * (base + k)
        coeffs[s - smin] = coeffs[s - smin] + poly
    return _normalize_rec(coeffs, max(0, smin))


# ------------------------------------------------------------ algebraic -> differential


def _rf(poly: DensePoly) -> RatFunc:
    return RatFunc.from_poly(poly)


class _QuotientRing:
    """Arithmetic in K(t)[T]/(P) with K = QQ, elements as coefficient lists."""

    def __init__(self, pcoeffs: list[DensePoly]):
        self.d = len(pcoeffs) - 1
        self.P = [_rf(c) for c in pcoeffs]
        self.lcinv = self.P[-1].inverse()
        self.zero = _rf_zero(QQ)

    def reduce(self, a: list[RatFunc]) -> list[RatFunc]:
        a = list(a)
        d = self.d
        for k in range(len(a) - 1, d - 1, -1):
            c = a[k]
            if c.is_zero():
                continue
            q = c * self.lcinv
            for j in range(d + 1):
                if not self.P[j].is_zero():
                    a[k - d + j] = a[k - d + j] - q * self.P[j]
        out = a[:d] + [self.zero] * (d - len(a[:d]))
        return out

    def mul(self, a, b):
        out = [self.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return self.reduce(out)


def _solve_rf(M: list[list[RatFunc]], rhs: list[RatFunc]) -> list[RatFunc]:
    """Solve M v = rhs over QQ(t) (M square, nonsingular)."""
    n = len(M)
    A = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if not A[i][c].is_zero()), None)
        if piv is None:
            raise ArithmeticError("singular system")
        A[c], A[piv] = A[piv], A[c]
        inv = A[c][c].inverse()
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return [A[i][n] for i in range(n)]


def _nullvector_rf(cols: list[list[RatFunc]]):
    """A nonzero vector c with sum c_j cols[j] = 0, or None (full column rank)."""
    m = len(cols)
    n = len(cols[0])
    A = [[cols[j][i] for j in range(m)] for i in range(n)]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if not A[i][c].is_zero()), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(n):
            if i != r and not A[i][c].is_zero():
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(m) if c not in pivots]
    if not free:
        return None
    fcol = free[0]
    one = _rf(DensePoly([1]))
    vec = [_rf_zero(QQ)] * m
    vec[fcol] = one
    for row, pc in enumerate(pivots):
        vec[pc] = -A[row][fcol]
    return vec


def algeq_to_diffeq(P: MultiPoly, T: str = "T", t: str = "t") -> OreOperator:
    """Minimal-order homogeneous operator annihilating every root of P(T, t).

    Works in QQ(t)[T]/(P): f' = -P_t(f)/P_T(f), higher derivatives by the
    derivation rule, then the first linear dependency among f, f', f'', ...
    """
    extra = [g for g in P.free_vars() if g not in (T, t)]
    if extra:
        raise ValueError(f"polynomial must involve only {T} and {t}; found {extra}")
    parts = P.coeffs_in(T)
    d = max(parts)
    if d < 1:
        raise ValueError("polynomial has degree 0 in T")

    def as_dense(q: MultiPoly | None) -> DensePoly:
        if q is None:
            return DensePoly([], QQ)
        deg = q.degree(t)
        cs = [0] * (deg + 1)
        ti = q.gens.index(t)
        for e, c in q.terms.items():
            cs[e[ti]] = c
        return DensePoly(cs, QQ)

    pc = [as_dense(parts.get(k)) for k in range(d + 1)]
    # squarefree test through the discriminant
    from .exactarith import resultant

    PT = P.diff(T)
    if d > 1 and resultant(P, PT, T).is_zero():
        raise ValueError("polynomial is not squarefree in T; pass its squarefree part")
    R = _QuotientRing(pc)
    zero = R.zero
    # inverse of P_T(f) in the quotient ring: solve (mult by P_T) v = 1
    pt = [_rf(pc[k] * k) for k in range(1, d + 1)]
    cols = []
    for j in range(d):
        basis = [zero] * d
        basis[j] = _rf(DensePoly([1]))
        cols.append(R.mul(pt, basis))
    Mrows = [[cols[j][i] for j in range(d)] for i in range(d)]
    e0 = [_rf(DensePoly([1]))] + [zero] * (d - 1)
    inv_pt = _solve_rf(Mrows, e0)
    p_t = [_rf(c.deriv()) for c in pc]  # P_t as polynomial in T
    fprime = R.mul([-c for c in R.reduce(p_t)], inv_pt)

    def derive(a: list[RatFunc]) -> list[RatFunc]:
        da = [c.deriv() for c in a]
        dT = [a[k] * _rf(DensePoly([k])) for k in range(1, len(a))] + [zero]
        chain = R.mul(dT[:d], fprime)
        return [x + y for x, y in zip(da, chain)]

    f = [zero] * d
    if d == 1:
        f = R.reduce([zero, _rf(DensePoly([1]))])
    else:
        f[1] = _rf(DensePoly([1]))
    ws = [f]
    while True:
        vec = _nullvector_rf(ws)
        if vec is not None:
            return OreOperator(vec, QQ).normalized()
        if len(ws) > d + 1:
            raise ArithmeticError("no dependency found (is P irreducible over QQ(t)?)")
        ws.append(derive(ws[-1]))
