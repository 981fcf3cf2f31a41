import json
import math
from collections import deque
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from cayleylab.bounds import applicable_report, lemma1_bound
from cayleylab.errors import FeasibilityError, PreconditionError
from cayleylab.groups import cyclic, elem_abelian_2, parse_group, quaternion
from cayleylab.montecarlo import (INFINITE, DiameterEstimate, GeneratingSet, block_rng,
                                  coX_mask, diam_gt2_mask, diameter, estimate_coX,
                                  estimate_pr_diam_gt2, exhaustive_coX, exhaustive_pr_diam_gt2,
                                  exhaustive_summary, sample_generating_set, sample_subsets,
                                  wilson_interval)


def bfs_diameter(G, members):
    """Plain-Python BFS on scalar products; independent of the vectorized routes."""
    dist = {0: 0}
    queue = deque([0])
    while queue:
        g = queue.popleft()
        for s in members:
            h = int(G.multiply(g, s))
            if h not in dist:
                dist[h] = dist[g] + 1
                queue.append(h)
    return max(dist.values()) if len(dist) == G.order else math.inf


def gs(G, *members):
    return GeneratingSet(G, tuple(members))


# -- sampling ------------------------------------------------------------------------

def test_sample_full_k_is_everything():
    G = cyclic(9)
    S = sample_generating_set(G, 8, block_rng(1, 0))
    assert S.members == tuple(range(1, 9))


def test_sample_subsets_shape_and_distinct():
    G = elem_abelian_2(4)
    rows = sample_subsets(G, 6, 500, block_rng(3, 0))
    assert rows.shape == (500, 6)
    assert all(len(set(r)) == 6 and 0 not in r for r in rows.tolist())


def test_inclusion_and_pair_frequencies():
    G = cyclic(11)
    n, k, draws = 11, 4, 100_000
    rows = sample_subsets(G, k, draws, block_rng(7, 0))
    member = np.zeros((draws, n), dtype=bool)
    member[np.arange(draws)[:, None], rows] = True
    p1 = k / (n - 1)
    p2 = k * (k - 1) / ((n - 1) * (n - 2))
    freq = member[:, 1:].mean(axis=0)
    # ten marginals checked at once, so allow four standard errors each
    assert np.all(np.abs(freq - p1) <= 4 * math.sqrt(p1 * (1 - p1) / draws))
    pair = (member[:, 1] & member[:, 2]).mean()
    assert abs(pair - p2) <= 3 * math.sqrt(p2 * (1 - p2) / draws)


def test_generating_set_validation():
    with pytest.raises(PreconditionError):
        gs(cyclic(5), 0, 1)
    with pytest.raises(PreconditionError):
        gs(cyclic(5), 2, 1)
    with pytest.raises(PreconditionError):
        sample_generating_set(cyclic(5), 5, block_rng(0, 0))


# -- diameters -----------------------------------------------------------------------

def test_diameter_examples():
    assert diameter(cyclic(6), gs(cyclic(6), 1)) == 5
    assert diameter(elem_abelian_2(2), gs(elem_abelian_2(2), 1, 2)) == 2
    assert diameter(cyclic(5), gs(cyclic(5), 1, 2, 3, 4)) == 1
    assert diameter(cyclic(6), gs(cyclic(6), 2)) == INFINITE
    assert diameter(quaternion(), gs(quaternion(), 2, 4)) < INFINITE


@pytest.mark.parametrize("spec", ["Z7", "Z2^3", "Q8", "Z3xZ4", "Q8xZ2"])
def test_vectorized_masks_match_bfs(spec):
    G = parse_group(spec)
    rng = np.random.default_rng(11)
    for k in range(1, G.order):
        rows = sample_subsets(G, k, 40, rng)
        mask = diam_gt2_mask(G, rows)
        for row, flag in zip(rows.tolist(), mask):
            S = sorted(row)
            d = bfs_diameter(G, S)
            assert d == diameter(G, gs(G, *S))
            assert bool(flag) == (d > 2)


def test_coX_mask_matches_direct_products():
    G = quaternion()
    rng = np.random.default_rng(5)
    rows = sample_subsets(G, 3, 200, rng)
    for y in range(1, 8):
        mask = coX_mask(G, y, rows)
        for row, flag in zip(rows.tolist(), mask):
            hit = any(int(G.multiply(a, b)) == y for a in row for b in row)
            assert bool(flag) == (not hit)


# -- exhaustive oracles --------------------------------------------------------------

def test_exhaustive_examples():
    assert exhaustive_pr_diam_gt2(elem_abelian_2(2), 2) == 0
    assert exhaustive_pr_diam_gt2(cyclic(5), 1) == 1
    rep = applicable_report(elem_abelian_2(3), 3)
    assert rep.contains(exhaustive_pr_diam_gt2(elem_abelian_2(3), 3))
    assert exhaustive_coX(elem_abelian_2(2), 2)[3] == Fraction(2, 3)


def test_exhaustive_matches_bfs_enumeration():
    G = cyclic(9)
    for k in range(1, 9):
        subsets = list(combinations(range(1, 9), k))
        hits = sum(bfs_diameter(G, S) > 2 for S in subsets)
        assert exhaustive_pr_diam_gt2(G, k) == Fraction(hits, len(subsets))


def test_exhaustive_summary_agrees():
    G = parse_group("Z2xZ4")
    prob, cox = exhaustive_summary(G, 3)
    assert prob == exhaustive_pr_diam_gt2(G, 3)
    assert cox == exhaustive_coX(G, 3)


def test_feasibility_guard():
    with pytest.raises(FeasibilityError):
        exhaustive_pr_diam_gt2(elem_abelian_2(6), 20)


# -- Monte Carlo ---------------------------------------------------------------------

def test_estimates_on_degenerate_cases():
    assert estimate_pr_diam_gt2(cyclic(5), 1, 2000, seed=1).point == 1.0
    assert estimate_pr_diam_gt2(elem_abelian_2(2), 2, 2000, seed=1).point == 0.0


def test_estimate_within_bracket():
    G = elem_abelian_2(5)
    est = estimate_pr_diam_gt2(G, 10, 20_000, seed=2)
    rep = applicable_report(G, 10)
    assert rep.lower <= est.point <= rep.upper


@pytest.mark.parametrize("spec,k", [("Z2^4", 4), ("Z13", 3), ("Q8xZ2", 5), ("Z3xZ5", 4)])
def test_mc_agrees_with_exhaustive(spec, k):
    G = parse_group(spec)
    assert math.comb(G.order - 1, k) <= 10**4
    exact = float(exhaustive_pr_diam_gt2(G, k))
    trials = 40_000
    est = estimate_pr_diam_gt2(G, k, trials, seed=9)
    sigma = math.sqrt(exact * (1 - exact) / trials)
    assert abs(est.point - exact) <= 3 * sigma + 1e-12


def test_estimates_independent_of_threads():
    G = elem_abelian_2(5)
    one = estimate_pr_diam_gt2(G, 12, 30_000, seed=4, threads=1)
    many = estimate_pr_diam_gt2(G, 12, 30_000, seed=4, threads=8)
    assert one == many
    other = estimate_pr_diam_gt2(G, 12, 30_000, seed=5, threads=1)
    assert other.hits != one.hits


def test_coX_estimate_below_lemma_bound():
    G = cyclic(40)
    y, k, trials = 7, 10, 30_000
    est = estimate_coX(G, y, k, trials, seed=3)
    bound = float(lemma1_bound(G, y, k))
    assert est.point <= bound + 3 * math.sqrt(bound * (1 - bound) / trials)
    with pytest.raises(PreconditionError):
        estimate_coX(G, 0, k, 10)


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0 and 0 < hi < 0.05
    lo, hi = wilson_interval(100, 100)
    assert hi == 1 and lo > 0.95
    lo, hi = wilson_interval(40, 100)
    assert lo < 0.4 < hi
    assert hi - lo == pytest.approx(0.19, abs=0.01)
    with pytest.raises(PreconditionError):
        wilson_interval(3, 2)


@pytest.mark.parametrize("hits,trials", [(0, 50), (7, 50), (9061, 30000), (1, 3)])
def test_wilson_matches_closed_form(hits, trials):
    z = 1.959963984540054
    phat = hits / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials ** 2)) / denom
    lo, hi = wilson_interval(hits, trials)
    assert lo == pytest.approx(max(0.0, centre - half), abs=1e-12)
    assert hi == pytest.approx(min(1.0, centre + half), abs=1e-12)


def test_estimate_json_roundtrip():
    est = estimate_pr_diam_gt2(cyclic(12), 3, 500, seed=8)
    d = json.loads(est.to_json())
    assert list(d) == ["group_spec", "n", "k", "trials", "hits", "point", "ci_low", "ci_high",
                       "seed"]
    assert DiameterEstimate.from_dict(d) == est
