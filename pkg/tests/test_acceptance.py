"""Acceptance suite: one group of tests per criterion.

Run ``pytest tests/test_acceptance.py -v``; the terminal summary prints one
PASS/FAIL line per criterion (see conftest.py).
"""
import time
from fractions import Fraction
from math import comb, prod
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from walkprove.exactarith import (
    GF, DensePoly, MultiPoly, crt_combine, divides, mul_z, prime_pool, rational_reconstruct,
    resultant, schoolbook_mul, sylvester_resultant,
)
from walkprove.guess import (
    AnsatzGrid, gcrd_local, guess_algeq, guess_local, guess_operators_mod_p, hermite_pade,
    modular_guess_pipeline, series_powers, verify_relation,
)
from walkprove.kernelproof import annihilator_closure, plug_in_order, verify_reduced_kernel_exact
from walkprove.ore import (
    BadReduction, OreOperator, PRecurrence, algeq_to_diffeq, diffeq_to_rec, gcrd_mod_p,
    p_curvature_zero, p_curvature_zero_binary, right_divide,
)
from walkprove.series import (
    AlgebraicSeriesSpec, TruncSeries, compose, kernel_root_X, kernel_root_Y, newton_lift,
    parameter_series, poly_at, rational_at, verify_parameterization,
)
from walkprove.walks import (
    GESSEL, KREWERAS, SectionSpec, StepSet, count, count_slice, enumerate_paths, section_series,
    specialize_section, unroll_terms,
)

from kreweras_data import EXCURSION_TEXT, OCTIC_TEXT, kreweras_P, parameterization

crit = pytest.mark.criterion
G2 = ("T", "t")


def _hyper(n: int) -> Fraction:
    """(5/6)_n (1/2)_n / ((5/3)_n (2)_n) * 16^n, from rising factorials."""
    def rising(a, k):
        return prod((a + i for i in range(k)), start=Fraction(1))
    return rising(Fraction(5, 6), n) * rising(Fraction(1, 2), n) * 16**n / (
        rising(Fraction(5, 3), n) * rising(Fraction(2), n))


# ---------------------------------------------------------------- 1


@crit(1, "excursion sequences from count (exact, < 1 s)")
def test_c1_excursion_counts():
    t0 = time.time()
    gessel = [count(GESSEL, n, 0, 0) for n in range(15)]
    assert gessel == [1, 0, 2, 0, 11, 0, 85, 0, 782, 0, 8004, 0, 88044, 0, 1020162]
    for n in range(21):
        assert count(KREWERAS, 3 * n, 0, 0) == 4**n * comb(3 * n, n) // ((n + 1) * (2 * n + 1))
    assert time.time() - t0 < 1.0


# ---------------------------------------------------------------- 2


@crit(2, "Kreweras algebraic guess from 80 terms (bit-exact, < 60 s)")
def test_c2_kreweras_guess():
    t0 = time.time()
    F = TruncSeries.from_array(SectionSpec(KREWERAS, "x0", 80).array())
    rep = guess_algeq(F, AnsatzGrid("algebraic", 6, 12, 80))
    assert time.time() - t0 < 60
    P = rep.candidate
    assert P == kreweras_P().canonical()
    const = P.coeffs_in("T")[0].with_gens(("t", "x"))
    want = MultiPoly.parse("16*x^3*t^4+108*t^4-72*x*t^3+8*x^2*t^2-2*t+x", ("t", "x"))
    assert const == want or const == -want


# ---------------------------------------------------------------- 3


@crit(3, "octic -> operator -> recurrence; hypergeometric terms n <= 50 (exact, < 10 s)")
def test_c3_octic_chain():
    t0 = time.time()
    rec = diffeq_to_rec(algeq_to_diffeq(MultiPoly.parse(OCTIC_TEXT, G2)))
    n = DensePoly.gen()
    want = PRecurrence([-(n * 6 + 5) * (n * 2 + 1) * 4, (n + 2) * (n * 3 + 5)])
    assert rec.equal_up_to_unit(want)
    terms = unroll_terms(rec, [1], 51)
    assert [Fraction(v) for v in terms] == [_hyper(k) for k in range(51)]
    assert time.time() - t0 < 10


# ---------------------------------------------------------------- 4


@crit(4, "Kreweras excursion polynomial and recurrence (exact)")
def test_c4_kreweras_excursions():
    F = TruncSeries.from_array(SectionSpec(KREWERAS, "x0", 80).array())
    P = guess_algeq(F, AnsatzGrid("algebraic", 6, 12, 80)).candidate
    P0 = P.subs({"x": 0}).with_gens(G2)
    E = MultiPoly.parse(EXCURSION_TEXT, G2)
    ok, q = divides(E, P0)
    assert ok and q.degree("T") == 0
    rec = diffeq_to_rec(algeq_to_diffeq(E))
    n = DensePoly.gen()
    want = PRecurrence([-(n + 2) * (n + 1) * 54, DensePoly([]), DensePoly([]),
                        (n + 6) * (n * 2 + 9)])
    assert rec.equal_up_to_unit(want)


# ---------------------------------------------------------------- 5


@crit(5, "exact resultant equals P^2 up to content, via divides (< 5 min)")
def test_c5_exact_resultant():
    t0 = time.time()
    P = kreweras_P()
    res = verify_reduced_kernel_exact(P, KREWERAS)
    ok, q = divides(P * P, res.resultant)
    assert ok
    # the cofactor is free of T: a monomial content factor in t and x
    assert q.degree("T") == 0 and len(q.terms) == 1
    assert res.ok and res.multiplicity == 2
    assert time.time() - t0 < 300


# ---------------------------------------------------------------- 6


@crit(6, "parameterization identity and U0 expansion (exact)")
def test_c6_parameterization():
    R1, R2, h = parameterization()
    assert verify_parameterization(R1, R2, h, kreweras_P())
    U0 = parameter_series(R1, h, 8)
    want = {1: {0: 1}, 2: {0: 1}, 3: {0: 1, 1: 1}, 4: {0: 5, 1: 2}}
    for k, row in want.items():
        assert U0.row(k) == row
    assert rational_at(R1, U0, h) == TruncSeries.monomial(1, 1, 0, 8)


# ---------------------------------------------------------------- 7


@crit(7, "kernel root expansions and X(t, Y(t, x)) = x mod t^50 (exact)")
def test_c7_kernel_series():
    Yk = kernel_root_Y(KREWERAS, 4)
    assert [Yk.row(k) for k in range(4)] == [{}, {0: 1}, {-1: 1}, {1: 1, -2: 1}]
    Yg = kernel_root_Y(GESSEL, 3)
    assert [Yg.row(k) for k in range(3)] == [{}, {-1: 1}, {0: 1, -2: 1}]
    Xg = kernel_root_X(GESSEL, 4)
    assert Xg.row(1) == {0: 1, -1: 1} and Xg.row(2) == {}
    assert Xg.row(3) == {e - 2: comb(3, e) for e in range(4)}
    # X carries growing negative x-powers, so it is expanded further than t^50
    Y, X = kernel_root_Y(GESSEL, 60), kernel_root_X(GESSEL, 110)
    assert compose(X, Y, 50) == TruncSeries.monomial(1, 0, 1, 50)


# ---------------------------------------------------------------- 8

P_MOD = prime_pool(1)[0]


@pytest.fixture(scope="module")
def gessel_section():
    return section_series(GESSEL, "x0", 1000, P_MOD)


def _operators_at(sec, x0):
    vals = [int(v) for v in specialize_section(sec, x0, P_MOD)]
    ops = guess_operators_mod_p(vals, P_MOD, 14, 43)
    return ops, gcrd_mod_p(ops, P_MOD) if len(ops) > 1 else (ops[0] if ops else None)


def _criterion8_holds(ops, g):
    assert ops, "no operator of order <= 14, degree <= 43"
    assert all(o.order == 14 and o.max_degree() <= 43 for o in ops), \
        f"orders/degrees {[(o.order, o.max_degree()) for o in ops]}"
    assert g.order == 11 and g.max_degree() <= 96, f"gcrd order {g.order}, degree {g.max_degree()}"


@crit(8, "Gessel operators mod one prime from 1000 terms (<= 10 min)")
@pytest.mark.xfail(strict=True, reason="at x0 = 1 the specialization degenerates: the basis "
                   "operators start at order 10 and the gcrd has order 5 (ledger)")
def test_c8_gessel_operators_at_x0_1(gessel_section):
    _criterion8_holds(*_operators_at(gessel_section, 1))


@crit(8, "Gessel operators mod one prime from 1000 terms (<= 10 min)")
def test_c8_gessel_operators_at_x0_2(gessel_section):
    t0 = time.time()
    ops, g = _operators_at(gessel_section, 2)
    _criterion8_holds(ops, g)
    assert len(ops) == 4
    assert time.time() - t0 < 600


# ---------------------------------------------------------------- 9


@pytest.fixture(scope="module")
def gessel_gcrd_over_QQ():
    rep = modular_guess_pipeline(SectionSpec(GESSEL, "x0", 1000),
                                 AnsatzGrid("differential", 14, 43, 1000), at=2, max_primes=40,
                                 local=gcrd_local(14, 43), ansatz_unknowns=15 * 44)
    return rep


@crit(9, "zero p-curvature of the order-11 gcrd for primes p < 30 (<= 30 min)")
def test_c9_p_curvature(gessel_gcrd_over_QQ, gessel_section):
    rep = gessel_gcrd_over_QQ
    L = rep.candidate
    assert L.order == 11 and L.max_degree() == 96
    assert rep.margin >= 0.2
    # it is the modular operator of criterion 8, lifted to QQ
    _, g = _operators_at(gessel_section, 2)
    assert L.reduce(P_MOD).normalized() == g.normalized()
    zero, bad = [], []
    for p in [q for q in range(2, 30) if all(q % d for d in range(2, q))]:
        try:
            z = p_curvature_zero(L, p)
        except BadReduction:
            bad.append(p)
            continue
        if p < L.order:
            # D_t^p has order p < 11 and cannot be a left multiple of L
            assert not z
            continue
        assert z, f"nonzero p-curvature mod {p}"
        if p <= 19:
            assert p_curvature_zero_binary(L, p)
        zero.append(p)
    assert zero == [11, 13, 17, 19, 23, 29]
    # control: a perturbed operator is caught
    M = L + OreOperator.parse("Dt^3")
    assert not p_curvature_zero(M, 13)


# ---------------------------------------------------------------- 10


@crit(10, "P1/P2 profiles (frozen reconstructions, modular re-check); single-point deg_T = 24")
def test_c10_U_relation_degree():
    N, x0 = 1200, 2
    sec = section_series(GESSEL, "x0", N, P_MOD)
    # U(t, x) = (G(t; x, 0) - G(t; 0, 0)) / x
    vals = [int(v) for v in specialize_section(sec[:, 1:], x0, P_MOD)]
    grid = AnsatzGrid("algebraic", 24, 44, N)
    g = guess_local(vals, "algebraic", grid, P_MOD, margin=0.0, only=24)
    assert g is not None and g.r == 24 and len(g.relations) == 1
    rel = g.relations[0]
    assert rel[24].size > 0 and max(c.size for c in rel) - 1 <= 44
    assert guess_local(vals, "algebraic", grid, P_MOD, margin=0.0, only=23) is None


DATA = Path(__file__).parent / "data"


def _check_frozen(name, section, degs, digits):
    """Frozen reconstruction: degree and digit profile, then a modular
    plug-in at a prime and a point used by neither reconstruction nor check."""
    P = MultiPoly.parse((DATA / name).read_text(), ("T", "t", "x"))
    assert [P.degree(v) for v in ("T", "t", "x")] == degs
    assert max(len(str(abs(int(c)))) for c in P.terms.values()) == digits
    q, x0, N = prime_pool(10)[9], 1009, 1200
    vals = [int(v) for v in specialize_section(section_series(GESSEL, section, N, q), x0, q)]
    f = TruncSeries.from_univariate(vals, dom=GF(q))
    Px = P.subs({"x": x0}).with_gens(G2).reduce(q)
    assert poly_at(Px, "T", f).is_zero()
    # control: a one-coefficient change is detected
    g = f + TruncSeries.monomial(1, 600, 0, N, GF(q))
    assert poly_at(Px, "T", g).t_valuation() < N


@crit(10, "P1/P2 profiles (frozen reconstructions, modular re-check); single-point deg_T = 24")
def test_c10_frozen_P1():
    _check_frozen("gessel_U_P1.txt", "U", [24, 44, 32], 21)


@crit(10, "P1/P2 profiles (frozen reconstructions, modular re-check); single-point deg_T = 24")
def test_c10_frozen_P2():
    _check_frozen("gessel_V_P2.txt", "V", [24, 46, 56], 27)


# ---------------------------------------------------------------- 11

PROP = settings(max_examples=20, deadline=None)
_TOKENS = ["N", "S", "E", "W", "NE", "NW", "SE", "SW"]


@crit(11, "property suites")
@pytest.mark.parametrize("steps", [GESSEL, KREWERAS])
def test_c11_counts_vs_enumeration(steps):
    for n in range(11):
        table = count_slice(steps, n)
        got = {(i, j): int(table[i, j]) for i in range(n + 1) for j in range(n + 1) if table[i, j]}
        assert got == enumerate_paths(steps, n)


@crit(11, "property suites")
@PROP
@given(st.sets(st.sampled_from(_TOKENS), min_size=1, max_size=4), st.integers(0, 8))
def test_c11_random_steps_vs_enumeration(toks, n):
    steps = StepSet.parse(",".join(sorted(toks)))
    table = count_slice(steps, n)
    brute = enumerate_paths(steps, n)
    assert {(i, j): int(table[i, j]) for (i, j) in brute} == brute
    assert int(table.sum()) == sum(brute.values())


@crit(11, "property suites")
@PROP
@given(st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=40),
       st.lists(st.integers(-10**30, 10**30), min_size=1, max_size=40))
def test_c11_poly_mul_vs_schoolbook(a, b):
    assert mul_z(a, b) == schoolbook_mul(a, b)


@crit(11, "property suites")
@PROP
@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 3)),
                       st.integers(-5, 5), min_size=1, max_size=6),
       st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(0, 3)),
                       st.integers(-5, 5), min_size=1, max_size=6))
def test_c11_resultant_vs_sylvester(a, b):
    g = ("T", "t", "z")
    A = MultiPoly({k: v for k, v in a.items() if sum(k) <= 8}, g) + MultiPoly.parse("z^2", g)
    B = MultiPoly({k: v for k, v in b.items() if sum(k) <= 8}, g) + MultiPoly.parse("z", g)
    assert resultant(A, B, "z") == sylvester_resultant(A, B, "z")


@crit(11, "property suites")
@PROP
@given(st.integers(-10**15, 10**15), st.integers(1, 10**15))
def test_c11_crt_ratrecon_round_trip(num, den):
    x = Fraction(num, den)
    ps = prime_pool(4)
    r, M = crt_combine([GF(p).convert(x) for p in ps], ps)
    assert rational_reconstruct(r, M) == x


@crit(11, "property suites")
@PROP
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 2), st.integers(-3, 3)), max_size=5),
       st.integers(1, 3))
def test_c11_newton_plug_back(terms, a):
    body = " + ".join(f"({c})*T^{i}*t^{j + 1}*x^{j}" for i, j, c in terms) or "0"
    P = MultiPoly.parse(f"T^2 - {a * a} + {body}", ("T", "t", "x"))
    r = newton_lift(AlgebraicSeriesSpec(P, a), 16)
    assert poly_at(P, "T", r).is_zero()


@crit(11, "property suites")
@PROP
@given(st.lists(st.integers(0, 96), min_size=30, max_size=30), st.integers(0, 6))
def test_c11_hermite_pade_relations_reverify(data, e):
    p = 97
    vecs = series_powers(data, 2, 30, p)
    for rel in hermite_pade(vecs, [e] * 3, 30, p):
        assert verify_relation(vecs, rel, 30, p)


small_poly = st.lists(st.integers(-4, 4), min_size=1, max_size=3)


def _op(cols):
    polys = [DensePoly(c) for c in cols]
    if polys[-1].is_zero():
        polys[-1] = DensePoly([1])
    return OreOperator.from_polys(polys)


@crit(11, "property suites")
@PROP
@given(st.lists(small_poly, min_size=2, max_size=4), st.lists(small_poly, min_size=1, max_size=3))
def test_c11_ore_right_division(a, b):
    L, M = _op(a), _op(b)
    Q, R = right_divide(L, M)
    assert R.is_zero() or R.order < M.order
    assert Q * M + R == L


@crit(11, "property suites")
@PROP
@given(st.integers(-3, 3).filter(bool), st.integers(-3, 3).filter(bool),
       st.sampled_from(["add", "mul"]))
def test_c11_closure_outputs_annihilate(c1, c2, op):
    R = annihilator_closure(op, [MultiPoly.parse(f"T^2 - 1 - ({c1})*t", G2),
                                 MultiPoly.parse(f"T^2 - 1 - ({c2})*t^2", G2)])
    need = 2 * R.degree("T") * max(R.degree("t"), 1) + 10

    def root(text):
        return newton_lift(AlgebraicSeriesSpec(MultiPoly.parse(f"T^2 - ({text})", G2), 1), need)

    A, B = root(f"1 + ({c1})*t"), root(f"1 + ({c2})*t^2")
    assert plug_in_order(R, A + B if op == "add" else A * B) == need
