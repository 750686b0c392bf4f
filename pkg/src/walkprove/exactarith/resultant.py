"""Multivariate resultants by evaluation, interpolation and Chinese remaindering.

The Sylvester determinant (``sylvester_resultant``) is kept as a slow
reference implementation for tests.
"""
from __future__ import annotations

import itertools
import logging
import random
from fractions import Fraction
from math import lcm

import numpy as np

from .dense import DensePoly, poly_resultant
from .domains import QQ, GF
from .multipoly import MultiPoly, divides
from .primes import prime_pool
from .recon import symmetric

log = logging.getLogger(__name__)

RESULTANT_PRIME_BITS = 28


class ResultantError(ArithmeticError):
    pass


# ------------------------------------------------------------ univariate mod p


def _lres_mod(a: list[int], b: list[int], p: int) -> int:
    """Resultant of nonzero coefficient lists (true degrees) mod p."""
    m, n = len(a) - 1, len(b) - 1
    sign = 1
    acc = 1
    while True:
        if n == 0:
            return sign * acc * pow(b[0], m, p) % p
        # remainder of a by b
        r = list(a)
        inv = pow(b[-1], p - 2, p)
        for k in range(m - n, -1, -1):
            c = r[k + n] * inv % p
            if c:
                for j in range(n + 1):
                    r[k + j] = (r[k + j] - c * b[j]) % p
        r = r[:n]
        while r and r[-1] == 0:
            r.pop()
        if not r:
            return 0
        k = len(r) - 1
        if m * n % 2:
            sign = -sign
        acc = acc * pow(b[-1], m - k, p) % p
        a, b, m, n = b, r, n, k


def formal_resultant_mod(a: list[int], b: list[int], m: int, n: int, p: int) -> int:
    """Resultant with formal degrees (m, n); leading coefficients may vanish."""
    a = [x % p for x in a[: m + 1]] + [0] * (m + 1 - len(a))
    b = [x % p for x in b[: n + 1]] + [0] * (n + 1 - len(b))
    ma, nb = m, n
    while ma >= 0 and a[ma] == 0:
        ma -= 1
    while nb >= 0 and b[nb] == 0:
        nb -= 1
    if ma < 0 or nb < 0:
        return 0
    if ma < m and nb < n:
        return 0
    if ma == 0 and nb == 0:
        return pow(a[0], n, p) * pow(b[0], m, p) % p
    res = _lres_mod(a[: ma + 1], b[: nb + 1], p) if ma > 0 or nb > 0 else 1
    if ma < m:
        # Res_{m,n} = (-1)^{n(m-ma)} lc(b)^{m-ma} Res_{ma,n}
        res = res * pow(b[n], m - ma, p) % p
        if n * (m - ma) % 2:
            res = -res % p
    elif nb < n:
        res = res * pow(a[m], n - nb, p) % p
    return res


# ------------------------------------------------------------ reference route


def sylvester_matrix(P: MultiPoly, Q: MultiPoly, var: str):
    """Sylvester matrix (entries MultiPoly) of P and Q with respect to var."""
    P, Q = P._align(Q)
    pc = P.coeffs_in(var)
    qc = Q.coeffs_in(var)
    m, n = max(pc), max(qc)
    zero = MultiPoly.zero(P.gens, P.dom)
    size = m + n
    M = [[zero] * size for _ in range(size)]
    for i in range(n):
        for k, c in pc.items():
            M[i][i + m - k] = c
    for i in range(m):
        for k, c in qc.items():
            M[n + i][i + n - k] = c
    return M


def sylvester_resultant(P: MultiPoly, Q: MultiPoly, var: str) -> MultiPoly:
    """Determinant of the Sylvester matrix by fraction-free elimination."""
    M = sylvester_matrix(P, Q, var)
    size = len(M)
    if size == 0:
        return MultiPoly.const(1, P.gens, P.dom)
    M = [row[:] for row in M]
    sign = 1
    prev = MultiPoly.const(1, M[0][0].gens, M[0][0].dom)
    for k in range(size - 1):
        piv = next((i for i in range(k, size) if not M[i][k].is_zero()), None)
        if piv is None:
            return MultiPoly.zero(prev.gens, prev.dom)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                ok, q = divides(prev, num)
                if not ok:
                    raise ResultantError("Bareiss division failed")
                M[i][j] = q
            M[i][k] = MultiPoly.zero(prev.gens, prev.dom)
        prev = M[k][k]
    det = M[size - 1][size - 1]
    return det * sign


# ------------------------------------------------------------ fast route


def _clear_denominators(P: MultiPoly) -> tuple[MultiPoly, int]:
    den = 1
    for c in P.terms.values():
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    return (P * den if den != 1 else P), den


def _eval_grid(coeff: MultiPoly, axes: list[int], pows: list[np.ndarray], shape, p: int):
    """Evaluate a polynomial (in the grid variables) on the full grid mod p."""
    out = np.zeros(shape, dtype=np.int64)
    nd = len(axes)
    for e, c in coeff.terms.items():
        term = np.full((1,) * nd, c % p, dtype=np.int64)
        for d, ax in enumerate(axes):
            k = e[ax]
            if k:
                vec = pows[d][k]
                sh = [1] * nd
                sh[d] = vec.shape[0]
                term = term * vec.reshape(sh) % p
        out = (out + term) % p
    return out


def _vandermonde_inverse(nodes: list[int], p: int) -> np.ndarray:
    """Matrix W with coefficients = W @ values for interpolation at nodes."""
    n = len(nodes)
    F = GF(p)
    W = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        others = [x for i, x in enumerate(nodes) if i != j]
        num = DensePoly.from_roots(others, F)
        den = 1
        for x in others:
            den = den * (nodes[j] - x) % p
        inv = pow(den, p - 2, p)
        for i, c in enumerate(num.c):
            W[i, j] = c * inv % p
    return W


def _apply_axis(vals: np.ndarray, W: np.ndarray, axis: int, p: int) -> np.ndarray:
    moved = np.moveaxis(vals, axis, 0)
    shp = moved.shape
    flat = moved.reshape(shp[0], -1)
    # entries < 2^28, so each product < 2^56; accumulate in chunks to stay in int64
    out = np.zeros_like(flat)
    step = 64
    for s in range(0, shp[0], step):
        out = (out + (W[:, s:s + step] @ flat[s:s + step]) % p) % p
    return np.moveaxis(out.reshape(shp), 0, axis)


def resultant(P: MultiPoly, Q: MultiPoly, var: str, check_points: int = 1,
              rng: random.Random | None = None) -> MultiPoly:
    """Resultant of P and Q with respect to ``var`` over QQ.

    Evaluates the remaining variables on a grid sized by the Bezout bound
    deg_v res <= deg_v P * deg_z Q + deg_z P * deg_v Q, interpolates modulo
    28-bit primes, confirms the interpolant at random extra points and
    lifts the coefficients by CRT against a Hadamard-type height bound.
    """
    P, Q = P._align(Q)
    if P.dom != QQ:
        raise ValueError("resultant expects QQ coefficients")
    rng = rng or random.Random(0x5EED)
    gens = P.gens
    zi = gens.index(var)
    m, n = P.degree(var), Q.degree(var)
    if m < 0 or n < 0:
        return MultiPoly.zero(gens, QQ)
    if m == 0:
        return P ** n
    if n == 0:
        return Q ** m
    P, dp = _clear_denominators(P)
    Q, dq = _clear_denominators(Q)
    scale = Fraction(1, dp ** n * dq ** m)
    others = [i for i, g in enumerate(gens) if i != zi and (P.degree(i) > 0 or Q.degree(i) > 0)]
    bounds = [P.degree(i) * n + m * Q.degree(i) for i in others]
    height = P.norm1() ** n * Q.norm1() ** m
    need_bits = height.bit_length() + 2
    nprimes = max(1, -(-need_bits // (RESULTANT_PRIME_BITS - 1)))
    primes = prime_pool(nprimes, bits=RESULTANT_PRIME_BITS, two_adicity=1)
    pc = P.coeffs_in(var)
    qc = Q.coeffs_in(var)
    shape = tuple(b + 1 for b in bounds)
    log.debug("resultant grid %s, %d primes", shape, nprimes)
    images = []
    for p in primes:
        nodes = [list(range(1, b + 2)) for b in bounds]
        pows = []
        for d, nd in enumerate(nodes):
            maxdeg = max(P.degree(others[d]), Q.degree(others[d]))
            tab = np.ones((maxdeg + 1, len(nd)), dtype=np.int64)
            base = np.array(nd, dtype=np.int64) % p
            for k in range(1, maxdeg + 1):
                tab[k] = tab[k - 1] * base % p
            pows.append(tab)
        A = [_eval_grid(pc.get(k, MultiPoly.zero(gens)), others, pows, shape, p) for k in range(m + 1)]
        B = [_eval_grid(qc.get(k, MultiPoly.zero(gens)), others, pows, shape, p) for k in range(n + 1)]
        A = np.stack(A, axis=-1).reshape(-1, m + 1).tolist()
        B = np.stack(B, axis=-1).reshape(-1, n + 1).tolist()
        vals = np.array([formal_resultant_mod(a, b, m, n, p) for a, b in zip(A, B)],
                        dtype=np.int64).reshape(shape)
        coeffs = vals
        for d, nd in enumerate(nodes):
            coeffs = _apply_axis(coeffs, _vandermonde_inverse(nd, p), d, p)
        # confirm at random points off the grid
        for _ in range(check_points):
            pt = [rng.randrange(len(nd) + 1, p) for nd in nodes]
            a = [_eval_point(pc.get(k), others, pt, p) for k in range(m + 1)]
            b = [_eval_point(qc.get(k), others, pt, p) for k in range(n + 1)]
            want = formal_resultant_mod(a, b, m, n, p)
            got = _horner_nd(coeffs, pt, p)
            if want != got:
                raise ResultantError(
                    f"interpolated resultant disagrees at check point mod {p}; degree bounds {bounds} too small")
        images.append(coeffs)
    # CRT
    M = 1
    acc = np.zeros(shape, dtype=object)
    for p, img in zip(primes, images):
        if M == 1:
            acc = img.astype(object)
            M = p
            continue
        inv = pow(M, -1, p)
        diff = ((img.astype(object) - acc) % p) * inv % p
        acc = acc + M * diff
        M *= p
    terms = {}
    flat_acc = acc.reshape(-1)
    for idx, val in enumerate(flat_acc):
        v = symmetric(int(val), M)
        if v:
            multi = np.unravel_index(idx, shape) if shape else ()
            e = [0] * len(gens)
            for d, ax in enumerate(others):
                e[ax] = int(multi[d])
            terms[tuple(e)] = QQ.convert(v * scale)
    return MultiPoly(terms, gens, QQ, _clean=True)


def _eval_point(c: MultiPoly | None, axes: list[int], pt: list[int], p: int) -> int:
    if c is None:
        return 0
    acc = 0
    for e, v in c.terms.items():
        term = v % p
        for d, ax in enumerate(axes):
            if e[ax]:
                term = term * pow(pt[d], e[ax], p) % p
        acc += term
    return acc % p


def _horner_nd(coeffs: np.ndarray, pt: list[int], p: int) -> int:
    arr = coeffs.astype(object)
    for d in range(len(pt) - 1, -1, -1):
        x = pt[d]
        # evaluate last axis
        n = arr.shape[-1]
        acc = arr[..., n - 1] % p
        for k in range(n - 2, -1, -1):
            acc = (acc * x + arr[..., k]) % p
        arr = acc
    return int(arr) % p
