"""Guessing algebraic and differential equations from truncated series.

Modular Hermite-Pade approximation (order bases over GF(p)), an ansatz
sweep that trades main degree against t-degree, and the reconstruction of
candidates over QQ(x) by rational interpolation in x, CRT and rational
number reconstruction.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Callable, Iterable, Sequence

import numpy as np

from .exactarith import (
    GF, QQ, DensePoly, MultiPoly, crt_combine, mul_mod, prime_pool, rat_interp_adaptive,
    rational_reconstruct,
)
from .exactarith.dense import poly_gcd
from .ore import OreOperator
from .series import TruncSeries, poly_at
from .walks import SectionSpec, specialize_section

log = logging.getLogger(__name__)

KINDS = ("algebraic", "differential")


class ShapeMismatch(ValueError):
    """Modular guesses disagree in shape beyond the tolerated outliers."""


class ReconstructionError(ArithmeticError):
    """Interpolation or rational reconstruction failed: add primes or points."""


@dataclass(frozen=True)
class AnsatzGrid:
    """Search space: main degree (deg_T or order in Dt) and t-degree."""

    kind: str
    max_main_degree: int
    max_t_degree: int
    N: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.max_main_degree < 1 or self.max_t_degree < 0:
            raise ValueError("degrees must be positive")
        if self.t_degree_cap(1) < 0:
            raise ValueError(f"{self.N} terms cannot overdetermine any ansatz")

    def slack(self, r: int) -> int:
        """Terms lost to differentiation for an ansatz of order r."""
        return r if self.kind == "differential" else 0

    def t_degree_cap(self, r: int, margin: float = 0.0) -> int:
        """Largest t-degree e with (r+1)(e+1) unknowns strictly below the
        usable terms, scaled by 1 + margin."""
        usable = self.N - self.slack(r)
        m = Fraction(margin).limit_denominator(1000)
        e = int((Fraction(usable - 1) / ((r + 1) * (1 + m)))) - 1
        return min(self.max_t_degree, e)


@dataclass
class GuessReport:
    candidate: object
    kind: str
    precision: int
    primes: list[int] = field(default_factory=list)
    points: list = field(default_factory=list)
    unknowns: int = 0
    matched: int = 0
    relations: list = field(default_factory=list)
    degenerate: bool = False
    dropped: list = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def margin(self) -> float:
        """Fraction of extra matched coefficients over ansatz unknowns."""
        return self.matched / self.unknowns - 1 if self.unknowns else float("inf")

    def to_text(self) -> str:
        lines = [f"kind: {self.kind}", f"precision: {self.precision}",
                 f"primes: {','.join(map(str, self.primes))}",
                 f"points: {','.join(map(str, self.points))}",
                 f"unknowns: {self.unknowns}", f"matched: {self.matched}",
                 f"margin: {self.margin:.3f}", f"degenerate: {self.degenerate}"]
        if self.dropped:
            lines.append(f"dropped: {self.dropped}")
        lines += [f"note: {n}" for n in self.notes]
        cand = self.candidate
        lines.append("candidate: " + ("none" if cand is None else
                                      cand.to_str() if hasattr(cand, "to_str") else str(cand)))
        return "\n".join(lines)


# ------------------------------------------------------------ Hermite-Pade


def hermite_pade(vectors: Sequence[Sequence[int]], bounds: Sequence[int], N: int, p: int):
    """Order basis of relations sum_i c_i(t) v_i = O(t^N), deg c_i <= bounds[i].

    Iterative (one order per step) basis update over GF(p): the pivot is the
    row of least defect among rows with nonzero residual; it is multiplied
    by t, the others are reduced against it. Rows whose defect ends <= 0
    generate every relation within the bounds. Returns a list of relations,
    each a list of int64 coefficient arrays (low degree first).
    """
    m = len(vectors)
    if m != len(bounds):
        raise ValueError("one degree bound per vector")
    V = np.zeros((m, N), dtype=np.int64)
    for i, v in enumerate(vectors):
        a = np.asarray(v[:N], dtype=np.int64) % p
        if a.shape[0] < N:
            raise ValueError(f"vector {i} has only {a.shape[0]} terms, need {N}")
        V[i] = a
    D = N + max(bounds) - min(bounds) + 2
    P = np.zeros((m, m, D), dtype=np.int64)
    for j in range(m):
        P[j, j, 0] = 1
    R = V
    defect = np.array([-b for b in bounds], dtype=np.int64)
    for k in range(N):
        r = R[:, k]
        nz = np.nonzero(r)[0]
        if nz.size == 0:
            continue
        piv = int(nz[np.argmin(defect[nz])])
        others = nz[nz != piv]
        if others.size:
            c = r[others] * pow(int(r[piv]), p - 2, p) % p
            R[others, k:] = (R[others, k:] - c[:, None] * R[piv, k:][None, :] % p) % p
            P[others] = (P[others] - c[:, None, None] * P[piv][None] % p) % p
        R[piv, k + 1:] = R[piv, k:-1].copy()
        R[piv, k] = 0
        P[piv, :, 1:] = P[piv, :, :-1].copy()
        P[piv, :, 0] = 0
        defect[piv] += 1
    rels = []
    for j in range(m):
        if defect[j] <= 0:
            rels.append([np.trim_zeros(P[j, i, : bounds[i] + 1], "b") for i in range(m)])
    rels.sort(key=_relation_key)
    return rels


def _relation_key(rel) -> tuple:
    main = max((i for i, c in enumerate(rel) if c.size), default=-1)
    tdeg = max((c.size - 1 for c in rel), default=-1)
    nterms = sum(int(np.count_nonzero(c)) for c in rel)
    return (main, tdeg, nterms)


def verify_relation(vectors, rel, N: int, p: int) -> bool:
    """Direct re-check that sum_i c_i v_i vanishes mod t^N."""
    acc = np.zeros(N, dtype=np.int64)
    for v, c in zip(vectors, rel):
        if c.size == 0:
            continue
        prod_ = mul_mod(np.asarray(v[:N], dtype=np.int64), c, p)[:N]
        acc[: prod_.shape[0]] = (acc[: prod_.shape[0]] + prod_) % p
    return not acc.any()


def hermite_pade_dense(vectors, bounds, N: int, p: int) -> list[np.ndarray]:
    """Reference solver: nullspace of the N x sum(bounds+1) coefficient
    matrix over GF(p). Returns a vector-space basis of flattened relations."""
    cols = []
    for v, b in zip(vectors, bounds):
        v = np.asarray(v[:N], dtype=np.int64) % p
        for s in range(b + 1):
            col = np.zeros(N, dtype=np.int64)
            col[s:] = v[: N - s]
            cols.append(col)
    A = np.stack(cols, axis=1) if cols else np.zeros((N, 0), dtype=np.int64)
    return _nullspace_mod(A, p)


def _nullspace_mod(A: np.ndarray, p: int) -> list[np.ndarray]:
    A = A.copy() % p
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), p - 2, p) % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows] = (A[rows] - col[rows, None] * A[r][None, :] % p) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = np.zeros(ncols, dtype=np.int64)
        v[f] = 1
        for row, pc in enumerate(pivots):
            v[pc] = -A[row, f] % p
        basis.append(v)
    return basis


def relation_space_dimension(rels, bounds) -> int:
    """Dimension over GF(p) of the relations spanned by t^a * rel within bounds."""
    dim = 0
    for rel in rels:
        room = min(b - (c.size - 1) for b, c in zip(bounds, rel) if c.size)
        dim += room + 1
    return dim


# ------------------------------------------------------------ local (one prime) guessing


def series_powers(f: Sequence[int], r: int, N: int, p: int) -> list[np.ndarray]:
    f = np.asarray(f[:N], dtype=np.int64) % p
    out = [np.zeros(N, dtype=np.int64)]
    out[0][0] = 1
    for _ in range(r):
        nxt = mul_mod(out[-1], f, p)[:N]
        out.append(np.concatenate([nxt, np.zeros(N - nxt.shape[0], dtype=np.int64)]))
    return out


def series_derivatives(f: Sequence[int], r: int, p: int) -> list[np.ndarray]:
    """f, f', ..., f^(r); the i-th is known to len(f) - i terms."""
    cur = np.asarray(f, dtype=np.int64) % p
    out = [cur]
    for _ in range(r):
        k = np.arange(1, cur.shape[0], dtype=np.int64) % p
        cur = cur[1:] * k % p
        out.append(cur)
    return out


def _vectors(values, kind: str, r: int, N: int, p: int):
    if kind == "algebraic":
        return series_powers(values, r, N, p), N
    ders = series_derivatives(values[:N], r, p)
    Ne = N - r
    return [d[:Ne] for d in ders], Ne


@dataclass
class LocalGuess:
    r: int
    e: int
    relations: list  # all basis relations at (r, e)
    N_used: int

    @property
    def best(self):
        return self.relations[0]


def guess_local(values: Sequence[int], kind: str, grid: AnsatzGrid, p: int,
                margin: float = 0.0, start: int = 1, only: int | None = None) -> LocalGuess | None:
    """Staircase sweep over main degree r (t-degree at the margin cap)."""
    N = min(grid.N, len(values))
    rs = [only] if only is not None else range(start, grid.max_main_degree + 1)
    for r in rs:
        e = grid.t_degree_cap(r, margin) if N == grid.N else \
            AnsatzGrid(grid.kind, grid.max_main_degree, grid.max_t_degree, N).t_degree_cap(r, margin)
        if e < 0:
            continue
        vecs, Ne = _vectors(values, kind, r, N, p)
        rels = hermite_pade(vecs, [e] * (r + 1), Ne, p)
        rels = [rel for rel in rels if any(c.size for c in rel)]
        if rels:
            for rel in rels:
                if not verify_relation(vecs, rel, Ne, p):
                    raise AssertionError("Hermite-Pade relation fails the direct re-check")
            return LocalGuess(r, e, rels, Ne)
    return None


def _relation_image(rel, p: int) -> dict[tuple[int, int], int]:
    """Relation as {(main index, t exponent): coefficient}, with its t-content
    removed and the lex-leading coefficient normalized to 1."""
    F = GF(p)
    polys = [DensePoly([int(v) for v in c], F) for c in rel]
    g = None
    for q in polys:
        if not q.is_zero():
            g = q if g is None else poly_gcd(g, q)
    if g is not None and g.degree > 0:
        polys = [q // g for q in polys]
    img = {}
    for i, q in enumerate(polys):
        for j, c in enumerate(q.c):
            if c:
                img[(i, j)] = int(c)
    lead = max(img)
    inv = pow(img[lead], p - 2, p)
    return {k: v * inv % p for k, v in img.items()}


# ------------------------------------------------------------ sources


class _Source:
    """Uniform access to modular univariate specializations of a series."""

    def __init__(self, source, N: int | None = None, at: int | None = None):
        self.source = source
        self.at = at
        self._cache: dict = {}
        if isinstance(source, SectionSpec):
            self.N = source.N if N is None else N
            self.has_x = source.has_parameter
            self.exact = None
        elif isinstance(source, TruncSeries):
            self.N = source.N if N is None else N
            self.has_x = not (source.is_zero() or (source.vmin == 0 and source.width == 1))
            self.exact = source if source.dom == QQ else None
        elif callable(source):
            if N is None:
                raise ValueError("N is required with a callable source")
            self.N = N
            self.has_x = True
            self.exact = None
        else:
            raise TypeError(f"unsupported series source {type(source).__name__}")
        if at is not None:
            if not self.has_x:
                raise ValueError("the series has no parameter x to specialize")
            self.has_x = False
            self.exact = None

    def values_at(self, p: int, points) -> list[list[int]]:
        """Specializations at every point, computing the modular section once."""
        src = self.source
        if isinstance(src, SectionSpec):
            arr = src.with_order(self.N).array(p)
            if arr.ndim == 1:
                return [[int(v) for v in arr]] * len(points)
            xs = [self.at if self.at is not None else x0 for x0 in points]
            return [[int(v) for v in specialize_section(arr, x0, p)] for x0 in xs]
        return [self.values(p, x0) for x0 in points]

    def values(self, p: int, x0) -> list[int]:
        src = self.source
        if self.at is not None:
            x0 = self.at
        if isinstance(src, SectionSpec):
            key = p
            if key not in self._cache:
                self._cache = {key: src.with_order(self.N).array(p)}
            arr = self._cache[key]
            if arr.ndim == 1:
                return [int(v) for v in arr]
            return [int(v) for v in specialize_section(arr, x0, p)]
        if isinstance(src, TruncSeries):
            if src.dom != QQ and src.dom.p != p:
                raise ValueError(f"series is given mod {src.dom.p}, not mod {p}")
            s = self._cache.get(p)
            if s is None:
                s = src.truncate(self.N) if src.dom != QQ else src.truncate(self.N).reduce(p)
                self._cache[p] = s
            return [int(v) for v in s.eval_x(x0)]
        return [int(v) % p for v in src(p, x0)][: self.N]


# ------------------------------------------------------------ reconstruction


def interpolate_images(images: dict, p: int, ref) -> dict[tuple, int]:
    """Recover polynomial dependence on x from normalized images at points.

    images: {x0: {key: value}} with images[x0][ref] == 1. Each coefficient
    is interpolated as a rational function of x, denominators are cleared,
    the x-content removed, and the ref coefficient made monic in x.
    Returns {key + (x exponent,): value}.
    """
    F = GF(p)
    xs = sorted(images)
    keys = sorted(set().union(*(images[x].keys() for x in xs)))
    fracs = {}
    for key in keys:
        ys = [images[x].get(key, 0) for x in xs]
        got = rat_interp_adaptive(xs, ys, p, check=2)
        if got is None:
            raise ReconstructionError(
                f"rational interpolation in x failed for coefficient {key} mod {p}: add points")
        n, d = got
        if max(n.degree, 0) + d.degree + 3 > len(xs):
            raise ReconstructionError(f"too few points to certify coefficient {key} mod {p}")
        fracs[key] = (n, d)
    den = DensePoly([1], F)
    for n, d in fracs.values():
        if d.degree > 0:
            den = den * (d // poly_gcd(den, d))
    polys = {k: n * (den // d) for k, (n, d) in fracs.items() if not n.is_zero()}
    g = None
    for q in polys.values():
        g = q if g is None else poly_gcd(g, q)
    if g is not None and g.degree > 0:
        polys = {k: q // g for k, q in polys.items()}
    s = F.inv(polys[ref].lc())
    out = {}
    for k, q in polys.items():
        for e, c in enumerate(q.c):
            if c:
                out[k + (e,)] = int(c) * s % p
    return out


def reconstruct_rationals(images: dict[int, dict], min_primes_for_stability: int = 2):
    """CRT + rational reconstruction of {prime: {key: residue}} images.

    When at least ``min_primes_for_stability`` primes are present the result
    must also reconstruct identically without the last prime.
    """
    primes = sorted(images)
    keys = sorted(set().union(*(images[p].keys() for p in primes)))

    def attempt(ps):
        M = prod(ps)
        out = {}
        for k in keys:
            r, _ = crt_combine([images[p].get(k, 0) for p in ps], ps)
            q = rational_reconstruct(r, M)
            if q is None:
                return None, k
            if q:
                out[k] = q
        return out, None

    full, bad = attempt(primes)
    if full is None:
        raise ReconstructionError(
            f"rational reconstruction failed for coefficient {bad} with {len(primes)} primes: add primes")
    if len(primes) >= min_primes_for_stability:
        part, _ = attempt(primes[:-1])
        if part != full:
            raise ReconstructionError(
                f"reconstruction not yet stable with {len(primes)} primes: add primes")
    return full


def _majority(shapes: dict, what: str, max_drop: float):
    counts = Counter(shapes.values())
    shape, _ = counts.most_common(1)[0]
    bad = sorted(k for k, s in shapes.items() if s != shape)
    allowed = int(max_drop * len(shapes))
    if len(bad) > allowed:
        raise ShapeMismatch(
            f"{len(bad)} of {len(shapes)} {what} disagree with the majority shape "
            f"(at most {allowed} may be dropped): {bad}")
    if bad:
        log.warning("dropping %s with outlier shape: %s", what, bad)
    return shape, bad


# ------------------------------------------------------------ pipeline


def _gens(kind: str, has_x: bool):
    main = "T" if kind == "algebraic" else "Dt"
    return (main, "t", "x") if has_x else (main, "t")


def _to_candidate(coeffs: dict, kind: str, has_x: bool, dom=QQ):
    gens = _gens(kind, has_x)
    P = MultiPoly({k: v for k, v in coeffs.items()}, gens, dom)
    if dom == QQ:
        P = P.canonical()
    else:
        P = P * dom.inv(P.leading()[1])
    if kind == "differential" and not has_x:
        r = max(k[0] for k in P.terms)
        polys = []
        for i in range(r + 1):
            cs = [0] * (max((k[1] for k in P.terms if k[0] == i), default=-1) + 1)
            for k, v in P.terms.items():
                if k[0] == i:
                    cs[k[1]] = v
            polys.append(DensePoly(cs, dom))
        return OreOperator.from_polys(polys).normalized()
    return P


def modular_guess_pipeline(source, grid: AnsatzGrid, primes: Sequence[int] | None = None,
                           points: Sequence[int] | None = None, margin: float = 0.2,
                           max_drop: float = 0.1, local: Callable | None = None,
                           check_points: int = 2, at: int | None = None,
                           ansatz_unknowns: int | None = None, max_primes: int | None = None,
                           threads: int = 1) -> GuessReport:
    """Guess over QQ(x) from modular images at (prime, x0) pairs.

    ``local(values, p)`` may replace the default per-pair guess; it must
    return a normalized image {(main, t-exponent): residue}. With ``at`` the
    parameter x is fixed to that integer and the result is univariate.
    ``ansatz_unknowns`` overrides the unknown count used for the margin
    (for candidates derived from guessed ones, such as a gcrd).

    With ``max_primes`` (and no explicit ``primes``) primes are added one at
    a time until the reconstruction is stable; otherwise the given primes
    are processed, over ``threads`` worker threads.
    """
    src = _Source(source, grid.N, at)
    adaptive = primes is None and max_primes is not None
    if adaptive:
        primes = prime_pool(max_primes)
    primes = list(primes) if primes else prime_pool(1)
    if not src.has_x:
        points = [1]
    elif not points:
        points = list(range(1, 41))
    points = list(points)
    kind = grid.kind
    shape_rt = None

    def default_local(values, p):
        nonlocal shape_rt
        if shape_rt is None:
            g = guess_local(values, kind, grid, p, margin=0.0)
            if g is None:
                return None
            rel = g.best
            tdeg = max(c.size - 1 for c in rel)
            shape_rt = (g.r, tdeg)
            log.info("ansatz shape: main degree %d, t-degree %d", g.r, tdeg)
        r, e = shape_rt
        vecs, Ne = _vectors(values, kind, r, min(grid.N, len(values)), p)
        rels = hermite_pade(vecs, [e] * (r + 1), Ne, p)
        rels = [rel for rel in rels if any(c.size for c in rel)]
        if not rels:
            return None
        return _relation_image(rels[0], p)

    local = local or default_local
    dropped: list = []

    def images_mod(p):
        """Normalized image mod p (interpolated in x when needed) or None."""
        imgs, lost = {}, []
        for x0, values in zip(points, src.values_at(p, points)):
            img = local(values, p)
            if img is None:
                lost.append((p, x0))
            else:
                imgs[x0] = img
        if not imgs:
            return None, lost + [(p, None)]
        shapes = {x0: frozenset(img) for x0, img in imgs.items()}
        shape, bad = _majority(shapes, f"points mod {p}", max_drop)
        lost += [(p, x0) for x0 in bad]
        imgs = {x0: img for x0, img in imgs.items() if x0 not in bad}
        if src.has_x:
            return interpolate_images(imgs, p, max(shape)), lost
        return {k + (0,): v for k, v in next(iter(imgs.values())).items()}, lost

    # the first prime fixes the ansatz shape; a miss there means no relation
    first, lost = images_mod(primes[0])
    dropped += lost
    if first is None and shape_rt is None and local is default_local:
        return GuessReport(None, kind, grid.N, primes[:1], points,
                           notes=["no relation within the ansatz grid"])
    per_prime: dict[int, dict] = {} if first is None else {primes[0]: first}

    def attempt():
        shapes = {p: frozenset(img) for p, img in per_prime.items()}
        shape, bad = _majority(shapes, "primes", max_drop)
        good = {p: img for p, img in per_prime.items() if p not in bad}
        return good, bad, reconstruct_rationals(good)

    rest = primes[1:]
    if adaptive:
        coeffs = None
        for p in rest:
            if len(per_prime) >= 2:
                try:
                    good, bad, coeffs = attempt()
                    break
                except ReconstructionError:
                    pass
            img, lost = images_mod(p)
            dropped += lost
            if img is not None:
                per_prime[p] = img
        if coeffs is None:
            good, bad, coeffs = attempt()
    else:
        if threads > 1 and rest:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(threads) as pool:
                results = list(pool.map(images_mod, rest))
        else:
            results = [images_mod(p) for p in rest]
        for p, (img, lost) in zip(rest, results):
            dropped += lost
            if img is not None:
                per_prime[p] = img
        if not per_prime:
            raise ReconstructionError("every (prime, point) pair failed")
        good, bad, coeffs = attempt()
    dropped += [(p, None) for p in bad]
    if src.has_x:
        cand_terms = coeffs
    else:
        cand_terms = {k[:2]: v for k, v in coeffs.items()}
    cand = _to_candidate(cand_terms, kind, src.has_x)
    rep = GuessReport(cand, kind, grid.N, sorted(good), points, dropped=dropped)
    _certify(rep, src, grid, margin, check_points, ansatz_unknowns)
    return rep


def _unknowns(cand, kind: str, has_x: bool) -> int:
    if isinstance(cand, OreOperator):
        polys = cand.poly_coeffs()
        return len(polys) * (max(q.degree for q in polys) + 1)
    gens = cand.gens
    out = 1
    for g in gens:
        out *= cand.degree(g) + 1
    return out


def _certify(rep: GuessReport, src: _Source, grid: AnsatzGrid, margin: float, check_points: int,
             unknowns: int | None = None):
    """Check the candidate against the series and record the matched count."""
    cand = rep.candidate
    kind = rep.kind
    rep.unknowns = unknowns or _unknowns(cand, kind, src.has_x)
    if src.exact is not None:
        matched = _exact_check(cand, kind, src.exact, grid.N)
        rep.notes.append("verified against the exact series")
    else:
        per_point = grid.N - (cand.order if isinstance(cand, OreOperator) else 0)
        need = -(-int((1 + margin) * rep.unknowns) // max(per_point, 1)) + 1
        matched = _modular_check(cand, kind, src, rep, max(check_points, need))
    rep.matched = matched
    if rep.margin < margin:
        raise ReconstructionError(
            f"candidate matches {matched} coefficients for {rep.unknowns} unknowns; "
            f"margin {rep.margin:.2f} is below {margin}: use more terms")


def _exact_check(cand, kind: str, f: TruncSeries, N: int) -> int:
    if kind == "algebraic":
        f = f.truncate(N)
        res = poly_at(cand, "T", f)
        if not res.is_zero():
            raise ReconstructionError(f"candidate does not annihilate the series at t^{res.t_valuation()}")
        # count the equations of the ansatz linear system: the (t, x)
        # coefficients reached by some t^j x^l f^i within the candidate's degrees
        r, e = cand.degree("T"), cand.degree("t")
        dx = cand.degree("x") if "x" in cand.gens else 0
        spans = [None] * N
        power = TruncSeries.const(1, N, f.dom)
        for i in range(r + 1):
            for k in range(N):
                row = power.row(k)
                if not row:
                    continue
                lo, hi = min(row), max(row) + dx
                for kk in range(k, min(N, k + e + 1)):
                    cur = spans[kk]
                    spans[kk] = (lo, hi) if cur is None else (min(lo, cur[0]), max(hi, cur[1]))
            power = power * f
        return sum(hi - lo + 1 for lo, hi in filter(None, spans))
    if isinstance(cand, OreOperator):
        vals = f.eval_x(1)
        out = cand.apply_series(vals)
        if any(out):
            raise ReconstructionError("candidate operator does not annihilate the series")
        return len(out)
    raise NotImplementedError("exact check of x-dependent operators; use modular checks")


def _modular_check(cand, kind: str, src: _Source, rep: GuessReport, check_points: int) -> int:
    """Evaluate the candidate at fresh (prime, x0) pairs against the series."""
    used_p = set(rep.primes)
    fresh_p = next(p for p in prime_pool(len(used_p) + 3) if p not in used_p)
    pts = [None] if not src.has_x else [max(rep.points) + 7 + 3 * i for i in range(check_points)]
    matched = 0
    F = GF(fresh_p)
    for x0 in pts:
        vals = src.values(fresh_p, x0 if x0 is not None else 1)
        if isinstance(cand, OreOperator) and cand.order >= len(vals):
            raise ReconstructionError("series too short to check the operator")
        if isinstance(cand, OreOperator):
            L = cand.reduce(fresh_p)
        else:
            spec = cand if x0 is None else cand.subs({"x": x0})
            L = spec.reduce(fresh_p)
        if kind == "algebraic":
            f = TruncSeries.from_univariate(vals, dom=F)
            P = L.with_gens(("T", "t"))
            res = poly_at(P, "T", f)
            if not res.is_zero():
                raise ReconstructionError(f"candidate fails the check mod {fresh_p} at x = {x0}")
            matched += len(vals)
        else:
            op = L if isinstance(L, OreOperator) else _multipoly_to_operator(L, F)
            out = op.apply_series([v % fresh_p for v in vals])
            if any(int(v) for v in out):
                raise ReconstructionError(f"candidate operator fails the check mod {fresh_p} at x = {x0}")
            matched += len(out)
    where = f" at x in {pts}" if any(x is not None for x in pts) else ""
    rep.notes.append(f"checked mod {fresh_p}{where}")
    return matched


def _multipoly_to_operator(P: MultiPoly, dom) -> OreOperator:
    parts = P.coeffs_in("Dt")
    r = max(parts)
    polys = []
    ti = P.gens.index("t")
    for i in range(r + 1):
        q = parts.get(i)
        cs = []
        if q is not None:
            cs = [0] * (q.degree("t") + 1)
            for e, c in q.terms.items():
                cs[e[ti]] = c
        polys.append(DensePoly(cs, dom))
    return OreOperator.from_polys(polys)


# ------------------------------------------------------------ front ends


def _guess(f, grid: AnsatzGrid, kind: str, margin: float, primes, points) -> GuessReport | None:
    if isinstance(f, TruncSeries) and f.is_zero():
        main = "T" if kind == "algebraic" else "Dt"
        P = MultiPoly.var(main, (main, "t"))
        cand = P if kind == "algebraic" else OreOperator.D()
        return GuessReport(cand, kind, grid.N, degenerate=True,
                           notes=["zero series: every operator without constant term annihilates it"])
    if isinstance(f, TruncSeries) and f.dom != QQ:
        p = f.dom.p
        src = _Source(f, grid.N)
        if not src.has_x:
            vals = [int(v) for v in f.eval_x(1)]
            g = guess_local(vals, kind, grid, p, margin=margin)
            if g is None:
                return None
            img = _relation_image(g.best, p)
            cand = _modular_candidate(img, kind, GF(p))
            rep = GuessReport(cand, kind, grid.N, [p], [],
                              unknowns=(g.r + 1) * (g.e + 1), matched=g.N_used,
                              relations=g.relations)
            return rep
    try:
        rep = modular_guess_pipeline(f, grid, primes, points, margin=margin)
    except ReconstructionError as exc:
        log.info("guess failed: %s", exc)
        return None
    return rep if rep.candidate is not None else None


def _modular_candidate(img: dict, kind: str, F):
    if kind == "algebraic":
        return MultiPoly(img, ("T", "t"), F)
    r = max(i for i, _ in img)
    polys = []
    for i in range(r + 1):
        cs = [0] * (max((j for a, j in img if a == i), default=-1) + 1)
        for (a, j), v in img.items():
            if a == i:
                cs[j] = v
        polys.append(DensePoly(cs, F))
    return OreOperator.from_polys(polys).normalized()


def guess_algeq(f, grid: AnsatzGrid, margin: float = 0.2, primes=None, points=None):
    """Candidate P(T, t[, x]) with P(f) = O(t^N), or None.

    f may be a TruncSeries over GF(p) (direct Hermite-Pade), a TruncSeries
    over QQ (modular images, CRT, rational reconstruction and interpolation
    in x when f depends on x), or a SectionSpec.
    """
    if grid.kind != "algebraic":
        raise ValueError("grid kind must be 'algebraic'")
    return _guess(f, grid, "algebraic", margin, primes, points)


def guess_diffeq(f, grid: AnsatzGrid, margin: float = 0.2, primes=None, points=None):
    """Candidate operator L with L(f) = O(t^(N - order)), or None."""
    if grid.kind != "differential":
        raise ValueError("grid kind must be 'differential'")
    return _guess(f, grid, "differential", margin, primes, points)


def guess_operators_mod_p(values: Sequence[int], p: int, order: int, max_t_degree: int,
                          N: int | None = None) -> list[OreOperator]:
    """All basis operators of a fixed order and t-degree bound over GF(p)."""
    N = len(values) if N is None else N
    vecs, Ne = _vectors(values, "differential", order, N, p)
    rels = hermite_pade(vecs, [max_t_degree] * (order + 1), Ne, p)
    F = GF(p)
    out = []
    for rel in rels:
        if not any(c.size for c in rel):
            continue
        out.append(OreOperator.from_polys([DensePoly([int(v) for v in c], F) for c in rel]))
    return out


def gcrd_local(order: int, max_t_degree: int, gcrd=None) -> Callable:
    """Per-pair step for the pipeline: the monic gcrd of all guessed
    operators of the given order and t-degree bound."""
    from .ore import gcrd_mod_p

    gcrd = gcrd or gcrd_mod_p

    def local(values, p):
        ops = guess_operators_mod_p(values, p, order, max_t_degree)
        if not ops:
            return None
        g = ops[0] if len(ops) == 1 else gcrd(ops, p)
        img = {}
        for i, q in enumerate(g.normalized().poly_coeffs()):
            for j, c in enumerate(q.c):
                if int(c):
                    img[(i, j)] = int(c)
        lead = max(img)
        inv = pow(img[lead], p - 2, p)
        return {k: v * inv % p for k, v in img.items()}

    return local


def precision_doubling(source, grid: AnsatzGrid, max_N: int, margin: float = 0.2,
                       primes=None, points=None) -> GuessReport:
    """Guess at N, 2N, ... until two consecutive runs agree.

    ``source`` is a SectionSpec or a callable N -> TruncSeries.
    """
    N = grid.N
    prev = None
    tried = []
    while N <= max_N:
        g = AnsatzGrid(grid.kind, grid.max_main_degree, grid.max_t_degree, N)
        if isinstance(source, SectionSpec):
            f = source.with_order(N)
        else:
            f = source(N)
        rep = _guess(f, g, grid.kind, margin, primes, points)
        cand = None if rep is None else rep.candidate
        tried.append((N, cand is not None))
        log.info("precision %d: %s", N, "candidate" if cand is not None else "none")
        if cand is not None and prev is not None and _same(cand, prev):
            rep.notes.append(f"stable at precision {N} (runs: {tried})")
            return rep
        prev = cand
        N *= 2
    return GuessReport(None, grid.kind, tried[-1][0] if tried else grid.N,
                       notes=[f"budget exhausted; runs: {tried}"])


def _same(a, b) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, OreOperator):
        return a.equal_up_to_unit(b)
    return a.equal_up_to_unit(b)
