"""Univariate polynomial multiplication kernels.

Coefficient lists are low degree first. Three interchangeable routes exist:
schoolbook (the reference), Kronecker substitution through a single GMP
integer product, and a number-theoretic transform for primes ``c*2^k + 1``.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np
from gmpy2 import mpz

from .primes import primitive_root, two_adicity

_SCHOOLBOOK_CUTOFF = 16


def schoolbook_mul(a: Sequence[int], b: Sequence[int], p: int | None = None) -> list[int]:
    if not len(a) or not len(b):
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    if p is not None:
        out = [c % p for c in out]
    return out


def _slot_bytes(bound: int) -> int:
    # one spare bit for the sign bias
    return (int(bound).bit_length() + 2 + 7) // 8


def _pack_unsigned(vals: Sequence[int], nb: int) -> mpz:
    return mpz.from_bytes(b"".join(int(v).to_bytes(nb, "little") for v in vals), "little")


def mul_z(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Exact product of integer polynomials (signed coefficients)."""
    la, lb = len(a), len(b)
    if not la or not lb:
        return []
    if min(la, lb) <= _SCHOOLBOOK_CUTOFF:
        return schoolbook_mul(a, b)
    ma = max(abs(int(v)) for v in a)
    mb = max(abs(int(v)) for v in b)
    if ma == 0 or mb == 0:
        return [0] * (la + lb - 1)
    nb = _slot_bytes(ma * mb * min(la, lb))
    A = _pack_unsigned([v if v > 0 else 0 for v in a], nb) - _pack_unsigned(
        [-v if v < 0 else 0 for v in a], nb
    )
    B = _pack_unsigned([v if v > 0 else 0 for v in b], nb) - _pack_unsigned(
        [-v if v < 0 else 0 for v in b], nb
    )
    n = la + lb - 1
    half = 1 << (8 * nb - 1)
    bias = mpz.from_bytes(half.to_bytes(nb, "little") * n, "little")
    data = (A * B + bias).to_bytes(n * nb, "little")
    return [int.from_bytes(data[i * nb:(i + 1) * nb], "little") - half for i in range(n)]


def _pack_mod(arr: np.ndarray, nb: int) -> mpz:
    n = arr.shape[0]
    buf = np.zeros((n, nb), dtype=np.uint8)
    buf[:, :4] = arr.astype("<u4").view(np.uint8).reshape(n, 4)
    return mpz.from_bytes(buf.tobytes(), "little")


def _unpack_mod(val: mpz, n: int, nb: int, p: int) -> np.ndarray:
    raw = np.frombuffer(val.to_bytes(n * nb, "little"), dtype=np.uint8).reshape(n, nb)
    lo = np.ascontiguousarray(raw[:, :8]).view("<u8").reshape(n) % np.uint64(p)
    out = lo.astype(np.int64)
    if nb > 8:
        hi = np.zeros(n, dtype=np.int64)
        for j in range(nb - 1, 7, -1):
            hi = hi * 256 + raw[:, j].astype(np.int64)
        out = (out + (hi % p) * (pow(2, 64, p))) % p
    return out


def mul_mod(a, b, p: int) -> np.ndarray:
    """Product of polynomials over F_p (p < 2^31); returns an int64 array."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    la, lb = a.shape[0], b.shape[0]
    if not la or not lb:
        return np.zeros(0, dtype=np.int64)
    if min(la, lb) <= _SCHOOLBOOK_CUTOFF:
        if min(la, lb) * (p - 1) ** 2 < (1 << 63):
            return np.convolve(a, b) % p
        return _conv_split(a, b, p)
    nb = max(8, _slot_bytes((p - 1) ** 2 * min(la, lb)))
    n = la + lb - 1
    return _unpack_mod(_pack_mod(a, nb) * _pack_mod(b, nb), n, nb, p)


def _conv_split(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # split 31-bit operands into 16-bit halves so np.convolve cannot overflow
    a0, a1 = a & 0xFFFF, a >> 16
    b0, b1 = b & 0xFFFF, b >> 16
    lo = np.convolve(a0, b0) % p
    mid = (np.convolve(a0, b1) % p + np.convolve(a1, b0) % p) % p
    hi = np.convolve(a1, b1) % p
    s16 = (1 << 16) % p
    s32 = (1 << 32) % p
    return (lo + mid * s16 % p + hi * s32 % p) % p


# ---------------------------------------------------------------- NTT route


def _mulmod_vec(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Elementwise x*y mod p for int64 inputs below 2^31."""
    if p < (1 << 31):
        xu = x.astype(np.uint64)
        yu = y.astype(np.uint64)
        return ((xu * yu) % np.uint64(p)).astype(np.int64)
    raise ValueError("prime too large for the numpy NTT")


def _roots(p: int, n: int, inverse: bool) -> np.ndarray:
    g = primitive_root(p)
    w = pow(g, (p - 1) // n, p)
    if inverse:
        w = pow(w, p - 2, p)
    out = np.empty(n // 2, dtype=np.int64)
    acc = 1
    for i in range(n // 2):
        out[i] = acc
        acc = acc * w % p
    return out


def ntt(a: np.ndarray, p: int, inverse: bool = False) -> np.ndarray:
    """Cooley-Tukey transform of length ``len(a)`` (a power of two) over F_p."""
    n = a.shape[-1]
    if n & (n - 1):
        raise ValueError("NTT length must be a power of two")
    if n > 1 and two_adicity(p) < n.bit_length() - 1:
        raise ValueError(f"p = {p} has no root of unity of order {n}")
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.int64)
    for i in range(bits):
        rev |= ((np.arange(n) >> i) & 1) << (bits - 1 - i)
    x = np.array(a, dtype=np.int64)[..., rev] % p
    w_all = _roots(p, n, inverse) if n > 1 else np.ones(1, dtype=np.int64)
    length = 2
    while length <= n:
        half = length // 2
        tw = w_all[:: n // length][:half]
        x = x.reshape(x.shape[:-1] + (n // length, length))
        u = x[..., :half]
        v = _mulmod_vec(x[..., half:], np.broadcast_to(tw, x[..., half:].shape), p)
        x = np.concatenate(((u + v) % p, (u - v) % p), axis=-1)
        x = x.reshape(x.shape[:-2] + (n,))
        length *= 2
    if inverse:
        x = _mulmod_vec(x, np.full(x.shape, pow(n, p - 2, p), dtype=np.int64), p)
    return x


def ntt_mul(a, b, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if not a.shape[0] or not b.shape[0]:
        return np.zeros(0, dtype=np.int64)
    n_out = a.shape[0] + b.shape[0] - 1
    size = 1 << (n_out - 1).bit_length()
    fa = ntt(np.pad(a, (0, size - a.shape[0])), p)
    fb = ntt(np.pad(b, (0, size - b.shape[0])), p)
    return ntt(_mulmod_vec(fa, fb, p), p, inverse=True)[:n_out]
