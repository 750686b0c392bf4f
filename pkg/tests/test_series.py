from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from kreweras_data import kreweras_P, parameterization
from walkprove.exactarith import GF, MultiPoly, prime_pool
from walkprove.series import (
    AlgebraicSeriesSpec, SeedError, TruncSeries, compose, fixed_point_iteration,
    kernel_root_X, kernel_root_Y, newton_lift, parameter_series, poly_at, rational_at,
    verify_parameterization,
)
from walkprove.walks import GESSEL, KREWERAS, section_series

G3 = ("T", "t", "x")


def L(d):
    """Laurent polynomial {exponent: coeff} from a dict, for readability."""
    return {e: c for e, c in d.items() if c}


def test_kreweras_Y_expansion():
    Y = kernel_root_Y(KREWERAS, 5)
    assert [Y.row(k) for k in range(5)] == [
        {}, {0: 1}, {-1: 1}, L({1: 1, -2: 1}), L({0: 3, -3: 1})]


def test_gessel_Y_and_X_expansions():
    Y = kernel_root_Y(GESSEL, 4)
    assert [Y.row(k) for k in range(4)] == [{}, {-1: 1}, {0: 1, -2: 1}, {1: 1, -1: 3, -3: 1}]
    X = kernel_root_X(GESSEL, 6)
    # (y+1)/y t + (y+1)^3/y^2 t^3 + 2 (y+1)^5/y^3 t^5
    assert X.row(1) == {0: 1, -1: 1}
    assert X.row(2) == {} and X.row(4) == {}
    assert X.row(3) == {e - 2: comb(3, e) for e in range(4)}
    assert X.row(5) == {e - 3: 2 * comb(5, e) for e in range(6)}


@pytest.mark.parametrize("steps,kernel", [
    (KREWERAS, "(x + Y + x^2*Y^2)*t - x*Y"),
    (GESSEL, "(1 + Y + x^2*Y + x^2*Y^2)*t - x*Y"),
])
def test_kernel_identity(steps, kernel):
    N = 60
    Y = kernel_root_Y(steps, N)
    K = MultiPoly.parse(kernel, ("Y", "t", "x"))
    assert poly_at(K, "Y", Y).is_zero()
    p = prime_pool(1)[0]
    assert kernel_root_Y(steps, N, GF(p)) == Y.reduce(p)


def test_gessel_X_of_Y_is_x():
    Y = kernel_root_Y(GESSEL, 60)
    X = kernel_root_X(GESSEL, 110)
    assert compose(X, Y, 50) == TruncSeries.monomial(1, 0, 1, 50)
    with pytest.raises(ValueError):
        compose(X, Y, 100)  # not determined by 110 terms of X


def test_newton_lift_examples():
    sq = newton_lift(AlgebraicSeriesSpec(MultiPoly.parse("T^2 - (1 - 4*t)", G3), 1), 12)
    want = [1] + [-2 * comb(2 * k - 2, k - 1) // k for k in range(1, 12)]
    assert sq.eval_x(1) == want
    A = MultiPoly.parse("T - (1 + 3*t*x - t^4*x^2)", G3)
    lifted = newton_lift(AlgebraicSeriesSpec(A, 1), 8)
    assert lifted == TruncSeries.from_terms({(0, 0): 1, (1, 1): 3, (4, 2): -1}, 8)
    with pytest.raises(SeedError):
        newton_lift(AlgebraicSeriesSpec(MultiPoly.parse("T^2 - t", G3), 0), 5)
    with pytest.raises(SeedError):
        newton_lift(AlgebraicSeriesSpec(MultiPoly.parse("T^2 - 1", G3), 2), 5)


def test_kreweras_root_matches_walk_counts():
    N = 30
    F = newton_lift(AlgebraicSeriesSpec(kreweras_P(), 1), N)
    assert F == TruncSeries.from_array(section_series(KREWERAS, "x0", N))
    assert F.x_valuation() == 0


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)), max_size=6),
       st.integers(1, 3))
def test_newton_plug_back_and_doubling(terms, a):
    # T^2 - a^2 + t*R(T, t, x): the seed a is a simple root
    body = " + ".join(f"({c})*T^{i}*t^{j + 1}*x^{j}" for i, j, c in terms) or "0"
    P = MultiPoly.parse(f"T^2 - {a * a} + {body}", G3)
    spec = AlgebraicSeriesSpec(P, a)
    r = newton_lift(spec, 16)
    assert poly_at(P, "T", r).is_zero()
    assert newton_lift(spec, 8) == r.truncate(8)
    p = prime_pool(1)[0]
    assert newton_lift(spec, 16, GF(p)) == r.reduce(p)


def test_compose_examples():
    outer = TruncSeries.from_terms({(n, n): 1 for n in range(10)}, 10)
    inner = TruncSeries.monomial(1, 1, 0, 10)
    assert compose(outer, inner) == TruncSeries.from_terms({(2 * n, 0): 1 for n in range(5)}, 10)
    with pytest.raises(ValueError):
        compose(outer, TruncSeries.const(1, 10))


def test_parameterization_identity_and_U0():
    R1, R2, h = parameterization()
    P = kreweras_P()
    assert verify_parameterization(R1, R2, h, P)
    perturbed = (R2[0] + MultiPoly.parse("U^3", R2[0].gens), R2[1])
    assert not verify_parameterization(R1, perturbed, h, P)
    trivial = (MultiPoly.parse("U", ("U", "x")), MultiPoly.parse("1", ("U", "x")))
    assert verify_parameterization(trivial, trivial, None, MultiPoly.parse("T - t", G3))

    U0 = parameter_series(R1, h, 9)
    assert [U0.row(k) for k in range(6)] == [
        {}, {0: 1}, {0: 1}, {0: 1, 1: 1}, {0: 5, 1: 2}, {0: 9, 1: 3, 2: 2}]
    assert rational_at(R1, U0, h) == TruncSeries.monomial(1, 1, 0, 9)
    F = rational_at(R2, U0, h)
    assert F == TruncSeries.from_array(section_series(KREWERAS, "x0", 9))


def test_fixed_point_iteration_converges_from_any_start():
    N = 40
    Y = TruncSeries.from_terms({(1, 0): 1, (2, 1): 1, (3, 0): -2}, N)
    A = TruncSeries.from_terms({(0, 0): 1, (2, 1): 3}, N)
    B = TruncSeries.from_terms({(1, 1): 1, (2, 0): -1}, N)
    U1, orders = fixed_point_iteration(A, B, Y)
    start = TruncSeries.from_terms({(k, k % 3): k + 1 for k in range(N)}, N)
    U2, orders2 = fixed_point_iteration(A, B, Y, start)
    assert U1 == U2
    assert all(b >= a + 1 for a, b in zip(orders2, orders2[1:]) if b < N)
    residual = U1 - (A + B * compose(U1, Y, N))
    assert residual.is_zero()


def test_mixed_rings_rejected():
    p = prime_pool(1)[0]
    a = TruncSeries.const(1, 5)
    with pytest.raises(ValueError):
        a + a.reduce(p)
