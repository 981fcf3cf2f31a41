import json
import math
from fractions import Fraction

import pytest

from cayleylab.bounds import (CSV_COLUMNS, DiameterBoundReport, applicable_report, clamp01,
                              generic_bracket, lemma1_bound, reports_to_csv, theorem1_report,
                              theorem1_upper, theorem2_bounds)
from cayleylab.errors import PreconditionError
from cayleylab.exactcomb import p_incl_excl
from cayleylab.groups import (build_disjoint_pair_set, catalog, cyclic, elem_abelian_2,
                              parse_group)
from cayleylab.montecarlo import exhaustive_coX, exhaustive_pr_diam_gt2, exhaustive_summary

SMALL_CATALOG = catalog(16)


def binomial_form_p(n, k, t):
    """p(n, k, t) through the binomial-ratio form of the alternating sum."""
    return sum(Fraction((-1) ** i * math.comb(t, i) * math.comb(n - 1 - 2 * i, k - 2 * i),
                        math.comb(n - 1, k)) for i in range(t + 1) if k - 2 * i >= 0)


def test_theorem1_upper_examples():
    assert theorem1_upper(16, 8) == 11
    assert clamp01(theorem1_upper(16, 8)) == 1
    for n in range(4, 16):
        assert theorem1_upper(n, 1) == n - 1


def test_theorem1_upper_regression_value():
    raw = theorem1_upper(100, 45)
    assert raw == 99 * binomial_form_p(100, 45, 8)
    assert raw == Fraction(686485351665, 47482207906)
    # t = floor(96/12) = 8 is far too small at n = 100 for a non-vacuous bound
    assert raw > 1


def test_theorem1_override_t():
    assert theorem1_upper(40, 10, t=9) == 39 * p_incl_excl(40, 10, 9)
    assert theorem1_report(40, 10, t=9).t_used == 9


def test_theorem1_rejects_small_n_and_bad_k():
    with pytest.raises(PreconditionError):
        theorem1_upper(3, 1)
    with pytest.raises(PreconditionError):
        theorem1_upper(10, 10)


def test_theorem2_z2_squared():
    rep = theorem2_bounds(2, 2)
    assert rep.p_value == Fraction(2, 3)
    assert rep.lower_raw == 0 and rep.lower == 0
    assert rep.upper_raw == 2 and rep.upper == 1
    assert exhaustive_pr_diam_gt2(elem_abelian_2(2), 2) == 0


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_theorem2_full_degree(d):
    n = 1 << d
    rep = theorem2_bounds(d, n - 1)
    assert rep.p_value == 0
    assert (rep.lower_raw, rep.upper_raw) == (-1, 0)
    assert (rep.lower, rep.upper) == (0, 0)


def test_theorem2_z2_cubed_contains_exhaustive():
    rep = theorem2_bounds(3, 3)
    assert rep.p_value == p_incl_excl(8, 3, 3)
    assert rep.contains(exhaustive_pr_diam_gt2(elem_abelian_2(3), 3))


def test_report_invariants_and_roundtrip():
    for rep in [theorem2_bounds(4, k) for k in range(1, 16)] + \
               [theorem1_report(28, k) for k in range(1, 28)]:
        assert 0 <= rep.lower <= rep.upper <= 1
        back = DiameterBoundReport.from_dict(json.loads(rep.to_json()))
        assert back == rep
    assert theorem2_bounds(4, 3).t_used == 7
    assert theorem1_report(28, 3).t_used == 2


def test_csv_rows():
    text = reports_to_csv([theorem2_bounds(2, 2), theorem1_report(16, 8)])
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1] == "4,2,1,2,3,0,1,elem_abelian_2"
    assert lines[2] == "16,8,1,11,15,0,1,general"


def test_generic_bracket_examples():
    assert generic_bracket(Fraction(0), 10, 3) == (Fraction(-3, 9), 0)
    assert generic_bracket(Fraction(1), 4, 1) == (Fraction(2, 3), 3)
    with pytest.raises(PreconditionError):
        generic_bracket(Fraction(3, 2), 4, 1)


def test_generic_bracket_contains_exhaustive_on_z2_cubed():
    G = elem_abelian_2(3)
    prob, cox = exhaustive_summary(G, 3)
    lo, hi = generic_bracket(max(cox[1:]), 8, 3)
    assert max(0, lo) <= prob <= min(1, hi)


def test_lemma1_equality_case_z2_squared():
    G = elem_abelian_2(2)
    assert exhaustive_coX(G, 2)[3] == Fraction(2, 3) == p_incl_excl(4, 2, 1)
    assert lemma1_bound(G, 3, 2) == Fraction(2, 3)


def test_lemma1_bounds_exhaustive_on_small_catalog():
    for spec in SMALL_CATALOG:
        G = parse_group(spec)
        for k in range(1, G.order):
            cox = exhaustive_coX(G, k)
            for y in range(1, G.order):
                assert cox[y] <= lemma1_bound(G, y, k), (spec, y, k)


def test_lemma1_monotone_in_pair_set_size():
    G = cyclic(31)
    full = len(build_disjoint_pair_set(G, 5))
    for k in (3, 8, 12):
        values = [p_incl_excl(31, k, s) for s in range(full + 1)]
        assert all(a >= b for a, b in zip(values, values[1:]))
        assert lemma1_bound(G, 5, k) == values[-1]


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_abelian_cox_equality(d):
    G = elem_abelian_2(d)
    n = G.order
    for k in range(1, n):
        cox = exhaustive_coX(G, k)
        target = p_incl_excl(n, k, (n - 2) // 2)
        assert all(c == target for c in cox[1:]), (d, k)


def test_applicable_report_dispatch():
    assert applicable_report(elem_abelian_2(3), 2).regime == "elem_abelian_2"
    assert applicable_report(cyclic(8), 2).regime == "general"
