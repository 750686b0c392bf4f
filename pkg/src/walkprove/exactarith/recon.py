"""Chinese remaindering, rational number and rational function reconstruction."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

from .dense import DensePoly, interpolate
from .domains import GF


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """The residue mod m1*m2 (coprime moduli) congruent to r1 and r2."""
    inv = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * inv % m2)) % (m1 * m2)


def crt_combine(residues: Sequence[int], moduli: Sequence[int]) -> tuple[int, int]:
    """Return (r, M) with r = residues[i] mod moduli[i] and M the product.

    Raises ValueError when two moduli share a factor.
    """
    if len(residues) != len(moduli) or not moduli:
        raise ValueError("need matching non-empty residues and moduli")
    r, M = residues[0] % moduli[0], moduli[0]
    for ri, mi in zip(residues[1:], moduli[1:]):
        if gcd(M, mi) != 1:
            raise ValueError(f"moduli not pairwise coprime (common factor {gcd(M, mi)})")
        r = crt_pair(r, M, ri, mi)
        M *= mi
    return r, M


def symmetric(r: int, M: int) -> int:
    r %= M
    return r - M if r > M // 2 else r


def rational_reconstruct(a: int, M: int, num_bound: int | None = None,
                         den_bound: int | None = None) -> Fraction | None:
    """Find n/d = a mod M with |n| <= num_bound, 0 < d <= den_bound.

    With the default balanced bounds (both floor(sqrt(M/2))) the answer is
    unique when it exists. Returns None on failure.
    """
    if num_bound is None:
        num_bound = isqrt(M // 2)
    if den_bound is None:
        den_bound = isqrt(M // 2)
    a %= M
    r0, r1 = M, a
    s0, s1 = 0, 1
    while r1 > num_bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > den_bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    if gcd(r1, s1) != 1:
        return None
    return Fraction(r1, s1)


def rat_interp(xs: Sequence[int], ys: Sequence[int], p: int, num_deg: int, den_deg: int,
               check: int = 1):
    """Rational function n/d over GF(p) through the points, deg n <= num_deg,
    deg d <= den_deg, d monic.

    Uses ``num_deg + den_deg + 1`` points for the reconstruction and the next
    ``check`` points to confirm it. Returns (n, d) or None when no such
    function fits all the points used.
    """
    F = GF(p)
    need = num_deg + den_deg + 1
    if len(xs) < need + check:
        raise ValueError(f"rat_interp needs {need + check} points, got {len(xs)}")
    X = [x % p for x in xs[:need]]
    Y = [y % p for y in ys[:need]]
    u = interpolate(X, Y, F)
    m = DensePoly.from_roots(X, F)
    r0, r1 = m, u
    t0, t1 = DensePoly([], F), DensePoly([1], F)
    while r1.degree > num_deg:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - q * t1
    if t1.is_zero() or t1.degree > den_deg:
        return None
    if any(t1(x) == 0 for x in X):
        return None
    inv = F.inv(t1.lc())
    n, d = r1.scale(inv), t1.scale(inv)
    for x, y in zip(xs[need:need + check], ys[need:need + check]):
        dx = d(x)
        if dx == 0 or n(x) != y % p * dx % p:
            return None
    return n, d


def rat_interp_adaptive(xs: Sequence[int], ys: Sequence[int], p: int, check: int = 2):
    """Rational reconstruction without an a priori degree split.

    Every pair (r_i, t_i) of the extended Euclidean remainder sequence is a
    candidate; the one of smallest total degree that also fits the last
    ``check`` points is returned as (n, d) with d monic, or None.
    """
    F = GF(p)
    use = len(xs) - check
    if use < 1:
        raise ValueError("not enough points")
    X = [x % p for x in xs[:use]]
    Y = [y % p for y in ys[:use]]
    m = DensePoly.from_roots(X, F)
    r0, r1 = m, interpolate(X, Y, F)
    t0, t1 = DensePoly([], F), DensePoly([1], F)
    best = None
    while True:
        size = max(r1.degree, 0) + t1.degree
        if size + 1 <= use and (best is None or size < best[0]):
            inv = F.inv(t1.lc())
            n, d = r1.scale(inv), t1.scale(inv)
            if all(n(x) == y % p * d(x) % p and d(x) != 0 for x, y in zip(xs[use:], ys[use:])):
                best = (size, (n, d))
        if r1.is_zero():
            break
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        t0, t1 = t1, t0 - q * t1
    return None if best is None else best[1]
