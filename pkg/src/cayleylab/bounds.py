"""Probability brackets on Pr(Diam > 2) in terms of p(n, k, t).

Every bound is computed exactly.  Reports keep both the raw value of each
side (which may fall outside [0, 1] and is what rate regressions want) and
the value clamped to a probability.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import PreconditionError
from .exactcomb import p_incl_excl
from .groups import FiniteGroup, build_disjoint_pair_set

GENERAL = "general"
ELEM_ABELIAN_2 = "elem_abelian_2"

CSV_COLUMNS = ["n", "k", "t_used", "p_num", "p_den", "lower", "upper", "regime"]


def clamp01(x: Fraction) -> Fraction:
    return min(Fraction(1), max(Fraction(0), x))


@dataclass(frozen=True)
class DiameterBoundReport:
    n: int
    k: int
    t_used: int
    p_value: Fraction
    lower: Fraction
    upper: Fraction
    regime: str
    lower_raw: Fraction
    upper_raw: Fraction

    def contains(self, prob: Fraction) -> bool:
        return self.lower <= prob <= self.upper

    def to_dict(self) -> dict:
        d = {"n": self.n, "k": self.k, "t_used": self.t_used, "regime": self.regime}
        for field in ("p_value", "lower", "upper", "lower_raw", "upper_raw"):
            value = getattr(self, field)
            stem = "p" if field == "p_value" else field
            d[f"{stem}_num"] = value.numerator
            d[f"{stem}_den"] = value.denominator
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DiameterBoundReport":
        def frac(stem):
            return Fraction(d[f"{stem}_num"], d[f"{stem}_den"])

        return cls(
            n=d["n"], k=d["k"], t_used=d["t_used"], p_value=frac("p"),
            lower=frac("lower"), upper=frac("upper"), regime=d["regime"],
            lower_raw=frac("lower_raw"), upper_raw=frac("upper_raw"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def csv_row(self) -> list:
        p = self.p_value
        return [self.n, self.k, self.t_used, p.numerator, p.denominator,
                str(self.lower), str(self.upper), self.regime]


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def generic_bracket(M: Fraction, n: int, k: int) -> tuple[Fraction, Fraction]:
    """Unclamped (M - k/(n-1), (n-1) M) for M = max_y Pr(no length-2 path 1 -> y)."""
    M = Fraction(M)
    if not 0 <= M <= 1:
        raise PreconditionError(f"M must be a probability, got {M}")
    if n < 2:
        raise PreconditionError(f"bracket needs n >= 2, got {n}")
    return M - Fraction(k, n - 1), (n - 1) * M


def theorem1_t(n: int) -> int:
    return (n - 4) // 12


def _check_nk(n: int, k: int) -> None:
    if not 1 <= k <= n - 1:
        raise PreconditionError(f"need 1 <= k <= n-1, got n={n}, k={k}")


def theorem1_upper(n: int, k: int, t: int | None = None) -> Fraction:
    """Raw (n-1) p(n, k, t) with t = floor((n-4)/12) unless overridden."""
    if n < 4:
        raise PreconditionError(f"general upper bound needs n >= 4, got n={n}")
    _check_nk(n, k)
    t = theorem1_t(n) if t is None else t
    return (n - 1) * p_incl_excl(n, k, t)


def theorem1_report(n: int, k: int, t: int | None = None) -> DiameterBoundReport:
    """General-group bracket: no lower bound is available, so lower is 0."""
    t = theorem1_t(n) if t is None else t
    upper = theorem1_upper(n, k, t)
    p = p_incl_excl(n, k, t)
    zero = Fraction(0)
    return DiameterBoundReport(n, k, t, p, zero, clamp01(upper), GENERAL, zero, upper)


def theorem2_bounds(d: int, k: int) -> DiameterBoundReport:
    """Two-sided bracket for Z2^d with t = (n-2)/2."""
    if d < 1:
        raise PreconditionError(f"need d >= 1, got d={d}")
    n = 1 << d
    _check_nk(n, k)
    t = (n - 2) // 2
    p = p_incl_excl(n, k, t)
    lower, upper = generic_bracket(p, n, k)
    return DiameterBoundReport(n, k, t, p, clamp01(lower), clamp01(upper),
                               ELEM_ABELIAN_2, lower, upper)


def lemma1_bound(G: FiniteGroup, y: int, k: int) -> Fraction:
    """p(n, k, |J|) for the greedy pair set J of y; bounds Pr(no length-2 path to y)."""
    _check_nk(G.order, k)
    J = build_disjoint_pair_set(G, y)
    return p_incl_excl(G.order, k, len(J))


def applicable_report(G: FiniteGroup, k: int) -> DiameterBoundReport:
    """Theorem bracket for G: the abelian two-sided one for Z2^d, else the general one."""
    if G.order >= 2 and G.is_elementary_abelian_2():
        return theorem2_bounds(G.order.bit_length() - 1, k)
    return theorem1_report(G.order, k)
