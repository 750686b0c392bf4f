"""Prime generation for multi-modular arithmetic."""
from __future__ import annotations

import os
from functools import lru_cache

# Bases that make Miller-Rabin deterministic below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _pool(bits: int, two_adicity: int, count: int) -> tuple[int, ...]:
    """Primes p = c*2^k + 1 below 2^bits, largest first."""
    out = []
    step = 1 << two_adicity
    c = ((1 << bits) - 2) // step
    while len(out) < count and c > 0:
        p = c * step + 1
        if is_prime(p):
            out.append(p)
        c -= 1
    if len(out) < count:
        raise ValueError(f"only {len(out)} primes of {bits} bits with 2^{two_adicity} | p-1")
    return tuple(out)


def prime_pool(count: int, bits: int = 31, two_adicity: int = 20) -> list[int]:
    """Return ``count`` NTT-friendly primes below ``2**bits``.

    The primes are deterministic (descending), so runs are reproducible. The
    environment variable ``WALKPROVE_PRIMES`` (comma separated) overrides the
    pool when set, either as a path to a prime-list file (whitespace or
    comma separated, ``#`` comments) or inline; it is only honored for the
    default 31-bit pool.
    """
    env = os.environ.get("WALKPROVE_PRIMES")
    if env and bits == 31:
        ps = read_prime_list(env)
        bad = [p for p in ps if not is_prime(p)]
        if bad:
            raise ValueError(f"WALKPROVE_PRIMES contains non-primes: {bad}")
        if len(ps) < count:
            extra = [p for p in _pool(bits, two_adicity, count + len(ps)) if p not in ps]
            ps = ps + extra[: count - len(ps)]
        return ps[:count]
    return list(_pool(bits, two_adicity, count))


def read_prime_list(spec: str) -> list[int]:
    """Primes from a file path or an inline comma separated list."""
    text = spec
    if os.path.isfile(spec):
        with open(spec) as fh:
            text = "\n".join(line.split("#", 1)[0] for line in fh)
    return [int(s) for s in text.replace(",", " ").split()]


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod the prime ``p``."""
    if p == 2:
        return 1
    phi = p - 1
    factors = []
    m, q = phi, 2
    while q * q <= m:
        if m % q == 0:
            factors.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        factors.append(m)
    g = 2
    while any(pow(g, phi // f, p) == 1 for f in factors):
        g += 1
    return g


def two_adicity(p: int) -> int:
    k, m = 0, p - 1
    while m % 2 == 0:
        m //= 2
        k += 1
    return k
