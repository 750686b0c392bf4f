from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from walkprove.exactarith import prime_pool
from walkprove.walks import (
    GESSEL, KREWERAS, SectionSpec, StepSet, WalkTable, count, count_slice, enumerate_paths,
    section_series, specialize_section,
)

ALL_STEPS = ["N", "S", "E", "W", "NE", "NW", "SE", "SW"]


def test_parse_errors():
    assert StepSet.parse("e, w ,ne,sw") == GESSEL
    with pytest.raises(ValueError):
        StepSet.parse("E,E")
    with pytest.raises(ValueError):
        StepSet.parse("E,NNE")
    with pytest.raises(ValueError):
        StepSet.parse("")


@pytest.mark.parametrize("steps", [GESSEL, KREWERAS])
def test_counts_match_enumeration(steps):
    for n in range(11):
        brute = enumerate_paths(steps, n)
        table = count_slice(steps, n)
        got = {(i, j): int(table[i, j]) for i in range(n + 1) for j in range(n + 1) if table[i, j]}
        assert got == brute


@settings(max_examples=25, deadline=None)
@given(st.sets(st.sampled_from(ALL_STEPS), min_size=1), st.integers(0, 7))
def test_random_step_sets_match_enumeration(toks, n):
    steps = StepSet.parse(",".join(sorted(toks)))
    table = count_slice(steps, n)
    brute = enumerate_paths(steps, n)
    assert int(table.sum()) == sum(brute.values()) <= len(steps) ** n
    for (i, j), c in brute.items():
        assert table[i, j] == c


def test_gessel_excursions():
    want = [1, 0, 2, 0, 11, 0, 85, 0, 782, 0, 8004, 0, 88044, 0, 1020162]
    assert [int(v) for v in section_series(GESSEL, "00", 15)] == want


def test_kreweras_excursions_closed_form():
    ex = section_series(KREWERAS, "00", 61)
    for n in range(21):
        assert ex[3 * n] == 4**n * comb(3 * n, n) // ((n + 1) * (2 * n + 1))
    assert all(ex[k] == 0 for k in range(61) if k % 3)


def test_modular_counts_agree_with_exact():
    N = 200
    exact = section_series(GESSEL, "x0", N)
    for p in prime_pool(3):
        mod = section_series(GESSEL, "x0", N, p)
        assert np.array_equal((exact % p).astype(np.int64), mod)


def test_kreweras_symmetry():
    T = WalkTable.build(KREWERAS, 25)
    assert KREWERAS.is_symmetric()
    assert np.array_equal(T.counts, T.counts.transpose(0, 2, 1))


def test_specialize_section():
    p = prime_pool(1)[0]
    sec = section_series(GESSEL, "x0", 30)
    got = specialize_section(sec, 3, p)
    want = [sum(int(sec[n, i]) * 3**i for i in range(30)) % p for n in range(30)]
    assert list(got) == want
    assert count(GESSEL, 4, 0, 0) == 11


def test_shifted_boundary_sections():
    N = 12
    Gx0 = section_series(GESSEL, "x0", N)
    G0y = section_series(GESSEL, "0y", N)
    U, V = section_series(GESSEL, "U", N), section_series(GESSEL, "V", N)
    # G(t; x, 0) = G(t; 0, 0) + x U(t, x), and likewise for V
    assert (Gx0[:, 1:] == U).all() and (G0y[:, 1:] == V).all()
    assert SectionSpec(GESSEL, "U", N).has_parameter
