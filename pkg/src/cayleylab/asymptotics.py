"""Floating-point asymptotics for p(n, k, t) and a(n, k, t).

Covers Stirling-type rate functions, the b * c factorization of the abelian
probability, the saddle radius r, the factorization
``a(n, k, t) = E(r) * I(r) / (2 pi)`` with I evaluated by adaptive
quadrature, the exponential rates in the linear and sublinear regimes,
and the sqrt(t log t) threshold.  Natural logarithms throughout.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from .errors import PreconditionError, QuadratureError
from .exactcomb import a_coeff_extract, binomial, p_from_a

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-10
QUAD_MAX_N = 400

GENERAL_D1 = 5.0 / 6.0
GENERAL_D2 = 1.0 / 12.0


def _open_unit(name: str, lam: float) -> None:
    if not 0.0 < lam < 1.0:
        raise PreconditionError(f"{name} needs 0 < lambda < 1, got {lam}")


def ln_fraction(x: Fraction) -> float:
    """Natural log of a positive rational, safe for huge numerators/denominators."""
    if x <= 0:
        raise PreconditionError(f"log of non-positive value {x}")
    return math.log(x.numerator) - math.log(x.denominator)


# -- Stirling approximations -----------------------------------------------------

def binom_rate(lam: float) -> float:
    """Entropy rate -lam ln lam - (1-lam) ln(1-lam) of C(n, lam n)."""
    _open_unit("binom_rate", lam)
    return -lam * math.log(lam) - (1.0 - lam) * math.log1p(-lam)


def binom_leading(lam: float) -> float:
    _open_unit("binom_leading", lam)
    return (2.0 * math.pi * lam * (1.0 - lam)) ** -0.5


def binom_approx(n: int, k: int) -> float:
    lam = k / n
    return math.exp(n * binom_rate(lam)) * binom_leading(lam) / math.sqrt(n)


def b_exact(t: int, k: int) -> Fraction:
    """b(t, k) = 2^k C(t, k) / C(2t, k)."""
    if t < 0 or not 0 <= k <= t:
        raise PreconditionError(f"b(t, k) needs 0 <= k <= t, got t={t}, k={k}")
    return Fraction((1 << k) * binomial(t, k), binomial(2 * t, k))


def b_rate(lam: float) -> float:
    """Exponential rate in t of b(t, lam t)."""
    _open_unit("b_rate", lam)
    return (2.0 - lam) * math.log1p(-lam / 2.0) - (1.0 - lam) * math.log1p(-lam)


def b_leading(lam: float) -> float:
    _open_unit("b_leading", lam)
    return math.sqrt((2.0 - lam) / (2.0 - 2.0 * lam))


def b_approx(t: int, k: int) -> float:
    lam = k / t
    return math.exp(t * b_rate(lam)) * b_leading(lam)


def c_factor(t: int, k: int) -> Fraction:
    """Polynomial correction c(t, k) with b(t, k) c(t, k) = p(2t+2, k, t)."""
    if t < 0 or not 0 <= k <= t:
        raise PreconditionError(f"c(t, k) needs 0 <= k <= t, got t={t}, k={k}")
    return Fraction((2 * t - k + 2) * (2 * t + 1 - k), (2 * t - 2 * k + 2) * (2 * t + 1))


def abelian_upper(t: int, k: int) -> Fraction:
    """(2t+1) b(t, k) c(t, k): the upper bound (n-1) p(n, k, (n-2)/2) with n = 2t+2."""
    return (2 * t + 1) * b_exact(t, k) * c_factor(t, k)


def abelian_sqrt_limit(c: float) -> float:
    """Limit exp(-c^2/2) of b * c when k = floor(c sqrt(n))."""
    if c <= 0:
        raise PreconditionError(f"c must be positive, got {c}")
    return math.exp(-c * c / 2.0)


# -- saddle point ------------------------------------------------------------------

def saddle_r(d1: float, d2: float, d3: float) -> float:
    """Positive root r of d3 = d1 r/(1+r) + 2 d2 r/(1+2r), in cancellation-free form."""
    if d1 <= 0 or d2 < 0 or d3 <= 0:
        raise PreconditionError(f"saddle_r needs d1, d3 > 0 and d2 >= 0, got ({d1}, {d2}, {d3})")
    if abs(d1 + 2 * d2 - 1.0) > 1e-12:
        raise PreconditionError(f"saddle_r needs d1 + 2 d2 = 1, got {d1 + 2 * d2}")
    if d3 >= d1 + d2:
        raise PreconditionError(f"d3={d3} too large: needs d3 < d1 + d2 = {d1 + d2}")
    disc = (1 - 3 * d3) ** 2 + 8 * d3 * (d1 + d2 - d3)
    return 2 * d3 / ((1 - 3 * d3) + math.sqrt(disc))


def stationarity_residual(r: float, d1: float, d2: float, d3: float) -> float:
    """|dF/dtheta(0)|, i.e. |d3 - d1 r/(1+r) - 2 d2 r/(1+2r)|."""
    return abs(d3 - d1 * r / (1 + r) - 2 * d2 * r / (1 + 2 * r))


@dataclass(frozen=True)
class SaddleParams:
    d1: float
    d2: float
    d3: float
    r: float

    @classmethod
    def from_nkt(cls, n: int, k: int, t: int) -> "SaddleParams":
        d1, d2, d3 = (n - 2 * t) / n, t / n, k / n
        return cls(d1, d2, d3, saddle_r(d1, d2, d3))

    @property
    def residual(self) -> float:
        return stationarity_residual(self.r, self.d1, self.d2, self.d3)


# -- phase and factorization -------------------------------------------------------

def phase_F(theta, r: float, d1: float, d2: float, d3: float):
    """Phase F(theta) with principal-branch logs; vectorizes over ``theta``."""
    z = np.exp(1j * np.asarray(theta, dtype=float))
    return (1j * d3 * np.asarray(theta)
            - d1 * np.log((1 + r * z) / (1 + r))
            - d2 * np.log((1 + 2 * r * z) / (1 + 2 * r)))


def F_first_deriv_at_0(r: float, d1: float, d2: float, d3: float) -> complex:
    return 1j * (d3 - d1 * r / (1 + r) - 2 * d2 * r / (1 + 2 * r))


def F_second_deriv_at_0(r: float, d1: float, d2: float) -> float:
    # The half-size expression d1 r/(2(1+r)^2) + d2 r/(1+2r)^2 is the Taylor
    # coefficient F''(0)/2, not the derivative.
    return d1 * r / (1 + r) ** 2 + 2 * d2 * r / (1 + 2 * r) ** 2


def F_second_deriv_lower_bound(r: float) -> float:
    return r / (2 * (1 + 2 * r) ** 2)


def re_F_lower_bound(theta, r: float):
    return (1 - np.cos(theta)) * r / (2 * (1 + 2 * r) ** 2)


def log_E_factor(r: float, n: int, k: int, t: int) -> float:
    """log of E(r; n, k, t) = r^-k (1+r)^(n-2t) (1+2r)^t."""
    if r <= 0:
        raise PreconditionError(f"E needs r > 0, got {r}")
    return -k * math.log(r) + (n - 2 * t) * math.log1p(r) + t * math.log1p(2 * r)


def E_rate(r: float, d1: float, d2: float, d3: float) -> float:
    """Exponential rate of E per unit n: -d3 ln r + d1 ln(1+r) + d2 ln(1+2r)."""
    if r <= 0:
        raise PreconditionError(f"E needs r > 0, got {r}")
    return -d3 * math.log(r) + d1 * math.log1p(r) + d2 * math.log1p(2 * r)


def _integrand(theta, r, n, k, t):
    z = cmath.exp(1j * theta)
    # integer powers of principal logs, so exp() gives the true product
    w = ((n - 2 * t) * cmath.log((1 + r * z) / (1 + r))
         + t * cmath.log((1 + 2 * r * z) / (1 + 2 * r))
         - 1j * k * theta)
    return cmath.exp(w)


def I_numeric(r: float, n: int, k: int, t: int,
              epsabs: float = QUAD_EPSABS, epsrel: float = QUAD_EPSREL) -> complex:
    """Adaptive quadrature of exp(-n F(theta)) over [-pi, pi]."""
    if r <= 0:
        raise PreconditionError(f"I needs r > 0, got {r}")
    if n > QUAD_MAX_N:
        raise PreconditionError(f"I_numeric guarded to n <= {QUAD_MAX_N}, got {n}")
    if t < 0 or 2 * t > n or not 0 <= k <= n:
        raise PreconditionError(f"inadmissible (n, k, t) = ({n}, {k}, {t})")
    parts = []
    for part in (lambda th: _integrand(th, r, n, k, t).real,
                 lambda th: _integrand(th, r, n, k, t).imag):
        val, err = quad(part, -math.pi, math.pi, epsabs=epsabs, epsrel=epsrel, limit=1000)
        if err > max(epsabs, epsrel * abs(val)):
            raise QuadratureError("quadrature of I(r; n, k, t) did not converge", err)
        parts.append(val)
    return complex(parts[0], parts[1])


def a_from_saddle(n: int, k: int, t: int) -> float:
    """a(n, k, t) reassembled as E(r) I(r) / (2 pi) at the saddle radius."""
    sp = SaddleParams.from_nkt(n, k, t)
    I = I_numeric(sp.r, n, k, t)
    return math.exp(log_E_factor(sp.r, n, k, t)) * I.real / (2 * math.pi)


def laplace_approx(f_second: float, g0: float, n: int, f0: complex = 0.0) -> float:
    """Leading term of  int exp(-n f) g  at an interior minimum of Re f.

    exp(-n f0) g0 sqrt(2 pi / (n f'')).  With this sign convention the
    integral I(r; n, k, t) is approximated by ``laplace_approx(F''(0), 1, n)``.
    """
    if f_second <= 0:
        raise PreconditionError(f"Laplace approximation needs f'' > 0, got {f_second}")
    if n < 1:
        raise PreconditionError(f"n must be >= 1, got {n}")
    value = cmath.exp(-n * f0) * g0 * math.sqrt(2 * math.pi / (n * f_second))
    return value.real


# -- regime rates --------------------------------------------------------------------

def r_linear(c: float) -> float:
    """Limiting saddle radius r_c for d1 = 5/6, d2 = 1/12, d3 = c."""
    return saddle_r(GENERAL_D1, GENERAL_D2, c)


def exp_rate_linear(c: float) -> float:
    """Exponential rate of p(n, floor(cn), floor((n-4)/12)).

    The rate of p = a / C(n, k) is the E-rate at r_c minus the entropy rate
    of the binomial, i.e. c ln c + (1-c) ln(1-c) - c ln r_c + (5/6) ln(1+r_c)
    + (1/12) ln(1+2 r_c).
    """
    if not 0.0 < c < 11.0 / 12.0:
        raise PreconditionError(f"linear rate needs 0 < c < 11/12, got {c}")
    r = r_linear(c)
    return E_rate(r, GENERAL_D1, GENERAL_D2, c) - binom_rate(c)


def exp_rate_sublinear(d2: float, d3: float) -> float:
    """Same rate with d1 = 1 - 2 d2 and a small d3 = k/n."""
    if d3 <= 0 or d2 <= 0:
        raise PreconditionError(f"sublinear rate needs d2, d3 > 0, got ({d2}, {d3})")
    d1 = 1.0 - 2.0 * d2
    r = saddle_r(d1, d2, d3)
    return E_rate(r, d1, d2, d3) - binom_rate(d3)


def sublinear_asymptote(d3: float) -> float:
    """Small-d3 equivalent -d3^2/12 of the sublinear rate."""
    return -d3 * d3 / 12.0


def sublinear_log_decay(n: int, alpha: float) -> float:
    """Leading log of p(n, floor(n^alpha), ...): n * (-d3^2/12) = -n^(2 alpha - 1)/12."""
    if not 0.5 < alpha < 1.0:
        raise PreconditionError(f"alpha must lie in (1/2, 1), got {alpha}")
    return -(n ** (2 * alpha - 1)) / 12.0


# -- threshold -----------------------------------------------------------------------

def threshold_k(t: int, refined: bool = False) -> float:
    """2 sqrt(t ln t), or 2 sqrt(t ln t + ln 2) when ``refined``."""
    if t < 2:
        raise PreconditionError(f"threshold needs t >= 2, got {t}")
    inner = t * math.log(t) + (math.log(2) if refined else 0.0)
    return 2.0 * math.sqrt(inner)


@dataclass(frozen=True)
class ThresholdRow:
    t: int
    k: int
    upper_bound: float


def threshold_scan(ts, scale: float = 1.0, refined: bool = False) -> list[ThresholdRow]:
    """(2t+1) b c at k = ceil(scale * threshold_k(t)) for each t."""
    rows = []
    for t in ts:
        k = math.ceil(scale * threshold_k(t, refined))
        if k > t:
            raise PreconditionError(f"k={k} exceeds t={t}; threshold scan needs larger t")
        rows.append(ThresholdRow(t, k, float(abelian_upper(t, k))))
    return rows


# -- regime scans (exact vs predicted) -----------------------------------------------

SCAN_COLUMNS = ["regime", "n", "k", "exact_value", "rate_prediction", "relative_error"]


@dataclass(frozen=True)
class ScanRow:
    regime: str
    n: int
    k: int
    exact_value: float
    rate_prediction: float

    @property
    def relative_error(self) -> float:
        return abs(self.exact_value - self.rate_prediction) / abs(self.rate_prediction)

    def csv_row(self) -> list:
        return [self.regime, self.n, self.k, repr(self.exact_value),
                repr(self.rate_prediction), repr(self.relative_error)]

    def to_dict(self) -> dict:
        return {"regime": self.regime, "n": self.n, "k": self.k,
                "exact_value": self.exact_value, "rate_prediction": self.rate_prediction,
                "relative_error": self.relative_error}


def general_log_p_rate(n: int, k: int) -> float:
    """(1/n) ln p(n, k, floor((n-4)/12)) from the exact rational."""
    return ln_fraction(p_from_a(n, k, (n - 4) // 12)) / n


def linear_scan(c: float, ns) -> list[ScanRow]:
    pred = exp_rate_linear(c)
    return [ScanRow("linear", n, int(c * n), general_log_p_rate(n, int(c * n)), pred)
            for n in ns]


def sublinear_scan(alpha: float, ns) -> list[ScanRow]:
    """Compare (1/n) ln p with the rate at the actual (d2, d3) of each n."""
    if not 0.5 < alpha < 1.0:
        raise PreconditionError(f"alpha must lie in (1/2, 1), got {alpha}")
    rows = []
    for n in ns:
        k = math.floor(n ** alpha)
        pred = exp_rate_sublinear(((n - 4) // 12) / n, k / n)
        rows.append(ScanRow("sublinear", n, k, general_log_p_rate(n, k), pred))
    return rows


def sqrt_scan(c: float, ds) -> list[ScanRow]:
    """Exact p(2^d, floor(c 2^(d/2)), (2^d-2)/2) against exp(-c^2/2)."""
    limit = abelian_sqrt_limit(c)
    rows = []
    for d in ds:
        n = 1 << d
        k = math.floor(c * math.sqrt(n))
        rows.append(ScanRow("sqrt", n, k, float(p_from_a(n, k, (n - 2) // 2)), limit))
    return rows


def rows_to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def stirling_relative_error(t: int, lam: float) -> float:
    """|b_approx - b_exact| / b_exact at k = round(lam t)."""
    k = round(lam * t)
    exact = b_exact(t, k)
    return abs(b_approx(t, k) - float(exact)) / float(exact)


def coefficient_check(n: int, k: int, t: int) -> float:
    """Relative error of the saddle reassembly against the exact coefficient."""
    exact = a_coeff_extract(n, k, t)
    return abs(a_from_saddle(n, k, t) - exact) / exact
