"""Exact evaluation of the pair-avoidance counts a(n, k, t) and probabilities p(n, k, t).

``a(n, k, t)`` is the number of k-subsets of an n-set that contain none of
``t`` fixed disjoint pairs, and ``p(n, k, t) = a(n-1, k, t) / C(n-1, k)``.
Three independent routes are provided (alternating sum, coefficient
extraction, and the closed form for ``n = 2t + 1``) together with a
brute-force enumeration oracle.  All results are exact integers or
:class:`fractions.Fraction` values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .errors import FeasibilityError, PreconditionError

# Exact probabilities are carried as Fractions (always reduced, denominator > 0).
ExactRatio = Fraction

BRUTEFORCE_MAX_N = 24


def binomial(n: int, k: int) -> int:
    """C(n, k), zero unless 0 <= k <= n."""
    if n < 0:
        raise PreconditionError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def falling_factorial(r: int, l: int) -> int:
    """r (r-1) ... (r-l+1), with the empty product equal to 1."""
    if r < 0 or l < 0:
        raise PreconditionError(f"falling_factorial needs r, l >= 0, got ({r}, {l})")
    return math.perm(r, l)


def _check_p_args(n: int, k: int, t: int) -> None:
    if n < 1:
        raise PreconditionError(f"p(n, k, t) needs n >= 1, got n={n}")
    if not 0 <= k <= n - 1:
        raise PreconditionError(f"p(n, k, t) needs 0 <= k <= n-1, got k={k}, n={n}")
    if t < 0 or 2 * t > n - 1:
        raise PreconditionError(f"p(n, k, t) needs 0 <= 2t <= n-1, got t={t}, n={n}")


def _check_a_args(n: int, k: int, t: int) -> None:
    if n < 0 or t < 0 or 2 * t > n:
        raise PreconditionError(f"a(n, k, t) needs 0 <= 2t <= n, got n={n}, t={t}")
    if not 0 <= k <= n:
        raise PreconditionError(f"a(n, k, t) needs 0 <= k <= n, got k={k}, n={n}")


def p_incl_excl(n: int, k: int, t: int) -> Fraction:
    """Inclusion-exclusion sum  sum_i (-1)^i C(t, i) (k)_{2i} / (n-1)_{2i}.

    Terms with 2i > k vanish because the falling factorial hits zero, so the
    loop stops there; this keeps t ~ n/2 cheap when k is small.
    """
    _check_p_args(n, k, t)
    total = Fraction(0)
    for i in range(min(t, k // 2) + 1):
        term = Fraction(math.comb(t, i) * math.perm(k, 2 * i), math.perm(n - 1, 2 * i))
        total += -term if i % 2 else term
    return total


def a_coeff_extract(n: int, k: int, t: int) -> int:
    """[y^k] (1+y)^(n-2t) (1+2y)^t as the convolution sum_j C(t,j) 2^j C(n-2t, k-j)."""
    _check_a_args(n, k, t)
    m = n - 2 * t
    return sum(
        math.comb(t, j) * (1 << j) * math.comb(m, k - j)
        for j in range(max(0, k - m), min(t, k) + 1)
    )


def a_abelian_closed(t: int, k: int) -> int:
    """Closed form of a(2t+1, k, t) = 2^k C(t,k) + 2^(k-1) C(t,k-1)."""
    if t < 0 or not 0 <= k <= t + 1:
        raise PreconditionError(f"a_abelian_closed needs t >= 0, 0 <= k <= t+1; got t={t}, k={k}")
    if k == 0:
        return 1
    return (1 << k) * binomial(t, k) + (1 << (k - 1)) * binomial(t, k - 1)


def a_bruteforce(n: int, k: int, t: int) -> int:
    """Count k-subsets of range(n) avoiding the pairs {0,1}, {2,3}, ..., {2t-2, 2t-1}.

    Pure enumeration; used only as an oracle for the other routes.
    """
    _check_a_args(n, k, t)
    if n > BRUTEFORCE_MAX_N:
        raise FeasibilityError(f"a_bruteforce limited to n <= {BRUTEFORCE_MAX_N}, got n={n}")
    pair_masks = [(1 << (2 * i)) | (1 << (2 * i + 1)) for i in range(t)]
    count = 0
    for subset in combinations(range(n), k):
        mask = 0
        for e in subset:
            mask |= 1 << e
        if not any(mask & pm == pm for pm in pair_masks):
            count += 1
    return count


def p_from_a(n: int, k: int, t: int) -> Fraction:
    """p(n, k, t) recovered as a(n-1, k, t) / C(n-1, k)."""
    _check_p_args(n, k, t)
    return Fraction(a_coeff_extract(n - 1, k, t), math.comb(n - 1, k))
