"""Quarter-plane walks with small steps: step sets, counting, section series."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

STEP_TOKENS = {
    "N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0),
    "NE": (1, 1), "NW": (-1, 1), "SE": (1, -1), "SW": (-1, -1),
}
_TOKEN_OF = {v: k for k, v in STEP_TOKENS.items()}

SECTIONS = ("x0", "0y", "00", "11", "xy", "U", "V")


@dataclass(frozen=True)
class StepSet:
    steps: frozenset

    def __post_init__(self):
        if not self.steps:
            raise ValueError("step set must be non-empty")
        for s in self.steps:
            if s not in _TOKEN_OF:
                raise ValueError(f"invalid small step {s}")

    @classmethod
    def parse(cls, text: str) -> "StepSet":
        """Parse compass notation such as ``"E,W,NE,SW"``."""
        toks = [t.strip().upper() for t in text.replace(";", ",").split(",") if t.strip()]
        if not toks:
            raise ValueError("empty step list")
        bad = [t for t in toks if t not in STEP_TOKENS]
        if bad:
            raise ValueError(f"unknown step token(s) {bad}; use N,S,E,W,NE,NW,SE,SW")
        if len(set(toks)) != len(toks):
            raise ValueError(f"repeated step in {text!r}")
        return cls(frozenset(STEP_TOKENS[t] for t in toks))

    @classmethod
    def of(cls, steps: Iterable[tuple[int, int]]) -> "StepSet":
        steps = list(steps)
        if len(set(steps)) != len(steps):
            raise ValueError("repeated step")
        return cls(frozenset(steps))

    def sorted(self) -> list[tuple[int, int]]:
        order = ["N", "S", "E", "W", "NE", "NW", "SE", "SW"]
        return sorted(self.steps, key=lambda s: order.index(_TOKEN_OF[s]))

    def tokens(self) -> str:
        return ",".join(_TOKEN_OF[s] for s in self.sorted())

    def __str__(self) -> str:
        return self.tokens()

    def __len__(self) -> int:
        return len(self.steps)

    def is_symmetric(self) -> bool:
        """Invariant under the swap x <-> y."""
        return all((dy, dx) in self.steps for dx, dy in self.steps)


GESSEL = StepSet.parse("E,W,NE,SW")
KREWERAS = StepSet.parse("W,S,NE")


# ---------------------------------------------------------------- counting


def _step_layer(layer: np.ndarray, steps, size: int, p: int | None) -> np.ndarray:
    """One DP step restricted to the active square [0, size)^2."""
    new = np.zeros_like(layer)
    src = layer[:size, :size]
    for dx, dy in steps:
        # target (i+dx, j+dy) with both coordinates >= 0
        i0, j0 = max(0, -dx), max(0, -dy)
        block = src[i0:size, j0:size]
        new[i0 + dx:size + dx, j0 + dy:size + dy] += block
    if p is not None:
        new %= p
    return new


def iter_layers(steps: StepSet, N: int, p: int | None = None):
    """Yield the layers f(n; ., .) for n = 0 .. N-1 (shape (N, N)).

    Entries are Python ints (object arrays) when ``p`` is None, else int64
    residues mod p. Only the square i, j <= n is ever nonzero.
    """
    dtype = object if p is None else np.int64
    width = N + 1
    layer = np.zeros((width, width), dtype=dtype)
    layer[0, 0] = 1
    st = list(steps.steps)
    for n in range(N):
        yield layer[:N, :N]
        layer = _step_layer(layer, st, min(n + 1, width - 1), p)


def count(steps: StepSet, n: int, i: int, j: int) -> int:
    """Number of quarter-plane walks of length n from (0,0) to (i,j)."""
    if min(n, i, j) < 0:
        raise ValueError("n, i, j must be non-negative")
    if max(i, j) > n:
        return 0
    for k, layer in enumerate(iter_layers(steps, n + 1)):
        if k == n:
            return int(layer[i, j])
    raise AssertionError("unreachable")


def count_slice(steps: StepSet, n: int) -> np.ndarray:
    """The full table f(n; i, j), 0 <= i, j <= n."""
    for k, layer in enumerate(iter_layers(steps, n + 1)):
        if k == n:
            return layer[: n + 1, : n + 1].copy()
    raise AssertionError("unreachable")


def enumerate_paths(steps: StepSet, n: int) -> dict[tuple[int, int], int]:
    """Brute-force count of endpoints over all step words (test oracle)."""
    out: dict[tuple[int, int], int] = {}
    st = list(steps.steps)
    for word in itertools.product(st, repeat=n):
        x = y = 0
        ok = True
        for dx, dy in word:
            x += dx
            y += dy
            if x < 0 or y < 0:
                ok = False
                break
        if ok:
            out[(x, y)] = out.get((x, y), 0) + 1
    return out


@dataclass
class WalkTable:
    """Counts f(n; i, j) for 0 <= n < N over the integers or mod p."""

    steps: StepSet
    N: int
    p: int | None
    counts: np.ndarray  # shape (N, N, N), [n, i, j]

    @classmethod
    def build(cls, steps: StepSet, N: int, p: int | None = None) -> "WalkTable":
        layers = [layer.copy() for layer in iter_layers(steps, N, p)]
        return cls(steps, N, p, np.stack(layers))

    def __call__(self, n: int, i: int, j: int):
        if n >= self.N or max(i, j) >= self.N:
            raise IndexError("outside the table")
        return self.counts[n, i, j]


def section_series(steps: StepSet, which: str, N: int, p: int | None = None) -> np.ndarray:
    """Truncated section of the complete generating function.

    which:
      ``"x0"``  -> array c[n, i] = f(n; i, 0)      (G(t; x, 0))
      ``"0y"``  -> array c[n, j] = f(n; 0, j)      (G(t; 0, y))
      ``"00"``  -> array c[n]    = f(n; 0, 0)
      ``"11"``  -> array c[n]    = sum_{i,j} f(n; i, j)
      ``"xy"``  -> array c[n, i, j] (triangular cut i + j <= 2n kept whole)
      ``"U"``   -> array c[n, i] = f(n; i+1, 0)    ((G(t; x, 0) - G(t; 0, 0)) / x)
      ``"V"``   -> array c[n, j] = f(n; 0, j+1)    ((G(t; 0, y) - G(t; 0, 0)) / y)
    The dtype is object (exact integers) when p is None, else int64 mod p.
    """
    if which not in SECTIONS:
        raise ValueError(f"unknown section {which!r}; expected one of {SECTIONS}")
    if N < 1:
        raise ValueError("truncation order must be at least 1")
    dtype = object if p is None else np.int64
    if which == "xy":
        return WalkTable.build(steps, N, p).counts
    if which in ("U", "V"):
        return section_series(steps, "x0" if which == "U" else "0y", N, p)[:, 1:]
    shape = (N,) if which in ("00", "11") else (N, N)
    out = np.zeros(shape, dtype=dtype)
    for n, layer in enumerate(iter_layers(steps, N, p)):
        if which == "x0":
            out[n] = layer[:, 0]
        elif which == "0y":
            out[n] = layer[0, :]
        elif which == "00":
            out[n] = layer[0, 0]
        else:
            s = layer[: n + 1, : n + 1].sum()
            out[n] = s % p if p is not None else s
    return out


@dataclass(frozen=True)
class SectionSpec:
    """Which section of the complete generating function, and how many terms."""

    steps: StepSet
    which: str
    N: int

    def __post_init__(self):
        if self.which not in SECTIONS:
            raise ValueError(f"unknown section {self.which!r}; expected one of {SECTIONS}")
        if self.N < 1:
            raise ValueError("truncation order must be at least 1")

    @property
    def has_parameter(self) -> bool:
        return self.which in ("x0", "0y", "U", "V")

    def array(self, p: int | None = None) -> np.ndarray:
        return section_series(self.steps, self.which, self.N, p)

    def with_order(self, N: int) -> "SectionSpec":
        return SectionSpec(self.steps, self.which, N)


def specialize_section(sec: np.ndarray, x0: int, p: int) -> np.ndarray:
    """Evaluate a section array c[n, i] at x = x0 mod p -> c[n]."""
    N, W = sec.shape
    powers = np.ones(W, dtype=np.int64)
    for i in range(1, W):
        powers[i] = powers[i - 1] * (x0 % p) % p
    a = (sec % p).astype(np.int64) if sec.dtype == object else np.asarray(sec, dtype=np.int64) % p
    # row-wise dot product without overflow: split powers into 16-bit halves
    lo, hi = powers & 0xFFFF, powers >> 16
    s_lo = (a * lo % p).sum(axis=1) % p
    s_hi = (a * hi % p).sum(axis=1) % p
    return (s_lo + s_hi * (1 << 16)) % p


def recurrence_unroll(rec, initial, n: int):
    """n-th term of a P-recursive sequence by forward iteration.

    ``rec`` is a PRecurrence (sum_i c_i(n) u_{n+i} = 0); ``initial`` gives
    u_0 .. u_{s-1}. Values are exact rationals (ints when integral).
    """
    return unroll_terms(rec, initial, n + 1)[n]


def unroll_terms(rec, initial, count: int) -> list:
    s = rec.order
    init = [Fraction(v) for v in initial]
    if len(init) < s:
        raise ValueError(f"need {s} initial values, got {len(init)}")
    u = list(init)
    k = 0
    while len(u) < count:
        # u_{k+s} from u_k .. u_{k+s-1}
        lead = rec.coeff_at(s, k)
        if lead == 0:
            raise ZeroDivisionError(
                f"leading recurrence coefficient vanishes at n = {k} (computing u_{k + s})")
        acc = Fraction(0)
        for i in range(s):
            c = rec.coeff_at(i, k)
            if c:
                acc += c * u[k + i]
        u.append(-acc / lead)
        k += 1
    out = u[:count]
    return [v.numerator if v.denominator == 1 else v for v in out]
