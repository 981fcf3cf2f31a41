from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleylab.errors import FeasibilityError, PreconditionError
from cayleylab.exactcomb import (a_abelian_closed, a_bruteforce, a_coeff_extract, binomial,
                                 falling_factorial, p_from_a, p_incl_excl)


def pascal_row(n):
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row


def test_binomial_small_and_out_of_range():
    assert binomial(5, 2) == 10
    assert binomial(5, 7) == 0
    assert binomial(5, -1) == 0


def test_binomial_matches_pascal_oracle():
    # value frozen from the Pascal recurrence
    assert pascal_row(64)[32] == 1832624140942590534
    assert binomial(64, 32) == 1832624140942590534
    row = pascal_row(30)
    assert [binomial(30, k) for k in range(31)] == row


def test_binomial_rejects_negative_n():
    with pytest.raises(PreconditionError):
        binomial(-1, 0)


@pytest.mark.parametrize("r,l,expected", [(4, 0, 1), (4, 2, 12), (3, 4, 0), (0, 0, 1)])
def test_falling_factorial(r, l, expected):
    assert falling_factorial(r, l) == expected


@pytest.mark.parametrize("n,k,t,expected", [
    (5, 2, 1, Fraction(5, 6)),
    (9, 3, 2, Fraction(11, 14)),
    (7, 3, 0, Fraction(1)),
])
def test_p_incl_excl_examples(n, k, t, expected):
    assert p_incl_excl(n, k, t) == expected


@pytest.mark.parametrize("args", [(5, 5, 1), (5, 2, 3), (0, 0, 0), (5, -1, 0), (5, 2, -1)])
def test_p_rejects_inadmissible(args):
    with pytest.raises(PreconditionError):
        p_incl_excl(*args)
    with pytest.raises(PreconditionError):
        p_from_a(*args)


@pytest.mark.parametrize("n,k,t,expected", [
    (5, 2, 1, Fraction(5, 6)),
    (6, 2, 2, Fraction(4, 5)),
    (11, 4, 0, Fraction(1)),
])
def test_p_from_a_examples(n, k, t, expected):
    assert p_from_a(n, k, t) == expected


def test_a_coeff_extract_examples():
    assert a_coeff_extract(4, 2, 1) == 5
    # (1+y)^6 (1+2y)^2 expanded by hand-rolled polynomial product
    poly = [1]
    for factor in [[1, 1]] * 6 + [[1, 2]] * 2:
        out = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            out[i] += c * factor[0]
            out[i + 1] += c * factor[1]
        poly = out
    assert poly[3] == 104
    assert a_coeff_extract(10, 3, 2) == 104 == a_bruteforce(10, 3, 2)
    assert a_coeff_extract(6, 5, 2) == 0


def test_a_abelian_closed_examples():
    assert a_abelian_closed(2, 1) == 5
    assert a_abelian_closed(2, 2) == 8
    assert all(a_abelian_closed(t, 0) == 1 for t in range(10))


def test_a_bruteforce_examples():
    assert a_bruteforce(4, 2, 1) == 5
    assert a_bruteforce(5, 1, 2) == 5
    assert a_bruteforce(4, 3, 2) == 0


def test_a_bruteforce_guard():
    with pytest.raises(FeasibilityError):
        a_bruteforce(25, 3, 1)


def test_a_rejects_2t_above_n():
    with pytest.raises(PreconditionError):
        a_coeff_extract(5, 2, 3)


admissible_p = st.integers(1, 60).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(0, n - 1), st.integers(0, (n - 1) // 2)))


@given(admissible_p)
@settings(max_examples=300)
def test_p_routes_agree_and_lie_in_unit_interval(nkt):
    n, k, t = nkt
    p = p_incl_excl(n, k, t)
    assert p == p_from_a(n, k, t)
    assert 0 <= p <= 1


@given(admissible_p)
@settings(max_examples=300)
def test_p_decreasing_in_t(nkt):
    n, k, t = nkt
    if 2 * (t + 1) <= n - 1:
        assert p_incl_excl(n, k, t + 1) <= p_incl_excl(n, k, t)


@given(st.integers(0, 80).flatmap(
    lambda t: st.tuples(st.just(t), st.integers(0, t + 1))))
def test_abelian_closed_form_matches_extraction(tk):
    t, k = tk
    assert a_abelian_closed(t, k) == a_coeff_extract(2 * t + 1, k, t)


def test_vanishing_exactly_when_pigeonhole_applies():
    for n in range(0, 17):
        for t in range(0, n // 2 + 1):
            for k in range(0, n + 1):
                assert (a_coeff_extract(n, k, t) == 0) == (k + t > n)
