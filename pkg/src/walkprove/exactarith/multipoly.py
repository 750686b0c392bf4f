"""Sparse multivariate polynomials with a text parser and a canonical printer."""
from __future__ import annotations

import heapq
import re
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .domains import QQ, PrimeField


class MultiPoly:
    """Polynomial in the ordered generators ``gens`` stored as
    ``{exponent tuple: coefficient}``. Terms compare lexicographically in the
    order of ``gens``, first generator most significant."""

    __slots__ = ("gens", "terms", "dom")

    def __init__(self, terms: Mapping[tuple, object], gens: Sequence[str], dom=QQ,
                 _clean: bool = False):
        self.gens = tuple(gens)
        self.dom = dom
        if _clean:
            self.terms = dict(terms)
        else:
            n = len(self.gens)
            out = {}
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError(f"exponent {e} does not match generators {self.gens}")
                c = dom.convert(c)
                if c != 0:
                    out[tuple(e)] = c
            self.terms = out

    # construction
    @classmethod
    def zero(cls, gens, dom=QQ) -> "MultiPoly":
        return cls({}, gens, dom, _clean=True)

    @classmethod
    def const(cls, c, gens, dom=QQ) -> "MultiPoly":
        return cls({(0,) * len(gens): c}, gens, dom)

    @classmethod
    def var(cls, name: str, gens, dom=QQ) -> "MultiPoly":
        gens = tuple(gens)
        e = [0] * len(gens)
        e[gens.index(name)] = 1
        return cls({tuple(e): 1}, gens, dom)

    @classmethod
    def parse(cls, text: str, gens: Sequence[str], dom=QQ) -> "MultiPoly":
        return _Parser(text, tuple(gens), dom).parse()

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self, var: str | int) -> int:
        i = self._idx(var)
        return max((e[i] for e in self.terms), default=-1)

    def min_degree(self, var: str | int) -> int:
        i = self._idx(var)
        return min((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def _idx(self, var) -> int:
        return var if isinstance(var, int) else self.gens.index(var)

    def leading(self):
        """(exponent, coefficient) of the lex-largest term."""
        e = max(self.terms)
        return e, self.terms[e]

    def coeff(self, exps: Mapping[str, int] | tuple):
        if isinstance(exps, tuple):
            return self.terms.get(exps, 0)
        e = tuple(exps.get(g, 0) for g in self.gens)
        return self.terms.get(e, 0)

    def free_vars(self) -> tuple[str, ...]:
        used = [False] * len(self.gens)
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used[i] = True
        return tuple(g for g, u in zip(self.gens, used) if u)

    def norm1(self) -> int:
        return sum(abs(c) for c in self.terms.values())

    def norm_inf(self) -> int:
        return max((abs(c) for c in self.terms.values()), default=0)

    # conversion
    def with_gens(self, gens: Sequence[str]) -> "MultiPoly":
        """Re-express in a different generator list (must contain the used vars)."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        pos = []
        for g in self.gens:
            pos.append(gens.index(g) if g in gens else -1)
        out = {}
        n = len(gens)
        for e, c in self.terms.items():
            ne = [0] * n
            for i, k in enumerate(e):
                if k:
                    if pos[i] < 0:
                        raise ValueError(f"variable {self.gens[i]} not in {gens}")
                    ne[pos[i]] = k
            out[tuple(ne)] = c
        return MultiPoly(out, gens, self.dom, _clean=True)

    def reduce(self, p: int) -> "MultiPoly":
        from .domains import GF

        return MultiPoly(self.terms, self.gens, GF(p))

    def coeffs_in(self, var: str) -> dict[int, "MultiPoly"]:
        """Split as sum of c_k * var^k; the c_k keep the same generators."""
        i = self._idx(var)
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            ne = e[:i] + (0,) + e[i + 1:]
            out.setdefault(k, {})[ne] = c
        return {k: MultiPoly(v, self.gens, self.dom, _clean=True) for k, v in out.items()}

    # arithmetic
    def _coerce(self, o) -> "MultiPoly":
        if isinstance(o, MultiPoly):
            if o.gens != self.gens:
                gens = self.gens + tuple(g for g in o.gens if g not in self.gens)
                return o.with_gens(gens)
            return o
        return MultiPoly.const(o, self.gens, self.dom)

    def _align(self, o):
        o = self._coerce(o)
        if o.gens != self.gens:
            return self.with_gens(o.gens), o
        return self, o

    def _norm(self, c):
        if isinstance(self.dom, PrimeField):
            return c % self.dom.p
        if isinstance(c, Fraction) and c.denominator == 1:
            return c.numerator
        return c

    def __add__(self, o):
        a, b = self._align(o)
        out = dict(a.terms)
        for e, c in b.terms.items():
            v = a._norm(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly(out, a.gens, a.dom, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: self._norm(-c) for e, c in self.terms.items()}, self.gens,
                         self.dom, _clean=True)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        if not isinstance(o, MultiPoly):
            c = self.dom.convert(o)
            if c == 0:
                return MultiPoly.zero(self.gens, self.dom)
            return MultiPoly({e: self._norm(v * c) for e, v in self.terms.items()}, self.gens,
                             self.dom, _clean=True)
        a, b = self._align(o)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: dict = {}
        bt = list(b.terms.items())
        for e1, c1 in a.terms.items():
            for e2, c2 in bt:
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly({e: a._norm(c) for e, c in out.items() if a._norm(c) != 0}, a.gens,
                         a.dom, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = MultiPoly.const(1, self.gens, self.dom)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, o) -> bool:
        if isinstance(o, MultiPoly):
            if o.gens != self.gens:
                try:
                    a, b = self._align(o)
                    return a.terms == b.terms
                except ValueError:
                    return False
            return self.terms == o.terms
        if isinstance(o, (int, Fraction)):
            return self.terms == MultiPoly.const(o, self.gens, self.dom).terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((frozenset(self.terms.items()), self.gens))

    def diff(self, var: str) -> "MultiPoly":
        i = self._idx(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = self._norm(c * e[i])
        return MultiPoly({e: c for e, c in out.items() if c}, self.gens, self.dom, _clean=True)

    # substitution
    def subs(self, values: Mapping[str, object]) -> "MultiPoly":
        """Substitute scalars or MultiPolys for generators (result keeps the
        union of the generators)."""
        out = self
        for var, val in values.items():
            out = out._subs_one(var, val)
        return out

    def _subs_one(self, var: str, val) -> "MultiPoly":
        if var not in self.gens:
            return self
        parts = self.coeffs_in(var)
        if not parts:
            return self
        if not isinstance(val, MultiPoly):
            val = self.dom.convert(val)
            i = self._idx(var)
            out: dict = {}
            for e, c in self.terms.items():
                ne = e[:i] + (0,) + e[i + 1:]
                out[ne] = out.get(ne, 0) + c * val ** e[i]
            return MultiPoly({e: self._norm(c) for e, c in out.items() if self._norm(c) != 0},
                             self.gens, self.dom, _clean=True)
        top = max(parts)
        acc = MultiPoly.zero(self.gens, self.dom)
        for k in range(top, -1, -1):
            acc = acc * val
            if k in parts:
                acc = acc + parts[k]
        return acc

    def subs_fraction(self, var: str, num: "MultiPoly", den: "MultiPoly") -> "MultiPoly":
        """Numerator of self(var = num/den) scaled by den^deg_var(self)."""
        parts = self.coeffs_in(var)
        d = max(parts) if parts else 0
        acc = MultiPoly.zero(self.gens, self.dom)
        num = self._coerce(num)
        den = self._coerce(den)
        npow = [MultiPoly.const(1, num.gens, self.dom)]
        for _ in range(d):
            npow.append(npow[-1] * num)
        dpow = [MultiPoly.const(1, den.gens, self.dom)]
        for _ in range(d):
            dpow.append(dpow[-1] * den)
        for k, c in parts.items():
            acc = acc + c * npow[k] * dpow[d - k]
        return acc

    def evaluate(self, point: Mapping[str, object]):
        """Evaluate all generators at scalars; returns a domain element."""
        vals = [self.dom.convert(point[g]) for g in self.gens]
        acc = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term = term * v ** k
            acc += term
        return self.dom.convert(acc) if isinstance(self.dom, PrimeField) else self._norm(acc)

    # content and normal forms
    def integer_content(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        den = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                den = lcm(den, c.denominator)
        g = 0
        for c in self.terms.values():
            g = gcd(g, int(c * den))
        return Fraction(g, den)

    def primitive(self) -> "MultiPoly":
        """Integer-primitive with positive lex-leading coefficient (QQ) or
        monic in lex order (GF(p))."""
        if not self.terms:
            return self
        if isinstance(self.dom, PrimeField):
            _, lc = self.leading()
            return self * self.dom.inv(lc)
        c = self.integer_content()
        _, lc = self.leading()
        if lc < 0:
            c = -c
        return MultiPoly({e: self._norm(Fraction(v) / c) for e, v in self.terms.items()},
                         self.gens, self.dom, _clean=True)

    canonical = primitive

    def equal_up_to_unit(self, o: "MultiPoly") -> bool:
        return self.primitive() == o.primitive()

    # printing
    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                (g if k == 1 else f"{g}^{k}") for g, k in zip(self.gens, e) if k
            )
            parts.append(_fmt_term(c, mon))
        out = parts[0]
        for s in parts[1:]:
            out += (" - " + s[1:]) if s.startswith("-") else (" + " + s)
        return out

    __str__ = to_str

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_str()!r}, gens={self.gens})"


def _fmt_term(c, mon: str) -> str:
    if not mon:
        return str(c)
    if c == 1:
        return mon
    if c == -1:
        return "-" + mon
    s = str(c)
    if "/" in s:
        s = f"({s})" if not s.startswith("-") else f"-({s[1:]})"
    return f"{s}*{mon}"


# ---------------------------------------------------------------- division


def divides(P: MultiPoly, Q: MultiPoly):
    """Exact division test: returns (True, Q/P) when P divides Q, else
    (False, None). Sparse lex-leading-term division over a field."""
    a, b = P._align(Q)
    P, Q = a, b
    if P.is_zero():
        return (Q.is_zero(), MultiPoly.zero(P.gens, P.dom) if Q.is_zero() else None)
    lead_e, lead_c = P.leading()
    inv = P.dom.inv(lead_c)
    rest = [(e, c) for e, c in P.terms.items() if e != lead_e]
    R = dict(Q.terms)
    heap = [tuple(-k for k in e) for e in R]
    heapq.heapify(heap)
    quot: dict = {}
    norm = P._norm
    # an exact quotient has deg_v = deg_v(Q) - deg_v(P) in every variable
    nv = len(P.gens)
    qmax = tuple(max((e[i] for e in Q.terms), default=0) - max(e[i] for e in P.terms)
                 for i in range(nv))
    if any(m < 0 for m in qmax) and not Q.is_zero():
        return False, None
    while heap:
        neg = heapq.heappop(heap)
        e = tuple(-k for k in neg)
        c = R.get(e, 0)
        if c == 0:
            R.pop(e, None)
            continue
        shift = tuple(x - y for x, y in zip(e, lead_e))
        if any(s < 0 or s > m for s, m in zip(shift, qmax)):
            return False, None
        q = norm(c * inv)
        quot[shift] = q
        del R[e]
        for e2, c2 in rest:
            ne = tuple(x + y for x, y in zip(shift, e2))
            v = norm(R.get(ne, 0) - q * c2)
            if v:
                if ne not in R:
                    heapq.heappush(heap, tuple(-k for k in ne))
                R[ne] = v
            else:
                R.pop(ne, None)
    return True, MultiPoly(quot, P.gens, P.dom, _clean=True)


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str, gens: tuple, dom):
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial near {text[pos:pos + 20]!r}")
            num, name, op = m.groups()
            if num is not None:
                self.toks.append(("num", int(num)))
            elif name is not None:
                if name not in gens:
                    raise ValueError(f"unknown variable {name!r} (generators {gens})")
                self.toks.append(("var", name))
            else:
                self.toks.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0
        self.gens = gens
        self.dom = dom

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> MultiPoly:
        if not self.toks:
            raise ValueError("empty polynomial")
        out = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"trailing tokens in polynomial: {self.toks[self.i:]}")
        return out

    def expr(self) -> MultiPoly:
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> MultiPoly:
        acc = self.power()
        while True:
            t = self.peek()
            if t == ("op", "*"):
                self.take()
                acc = acc * self.power()
            elif t == ("op", "/"):
                self.take()
                d = self.power()
                if not d.is_const() or d.is_zero():
                    raise ValueError("division only by nonzero constants")
                acc = acc * self.dom.inv(d.coeff((0,) * len(self.gens)))
            elif t[0] in ("num", "var") or t == ("op", "("):
                acc = acc * self.power()  # implicit multiplication
            else:
                return acc

    def power(self) -> MultiPoly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                raise ValueError("negative exponents are not polynomial")
            kind, val = self.take()
            if kind != "num":
                raise ValueError("exponent must be a nonnegative integer")
            return base ** (val * sign)
        return base

    def atom(self) -> MultiPoly:
        kind, val = self.take()
        if kind == "num":
            return MultiPoly.const(val, self.gens, self.dom)
        if kind == "var":
            return MultiPoly.var(val, self.gens, self.dom)
        if (kind, val) == ("op", "("):
            e = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return e
        if (kind, val) == ("op", "-"):
            return -self.power()
        raise ValueError(f"unexpected token {val!r}")
