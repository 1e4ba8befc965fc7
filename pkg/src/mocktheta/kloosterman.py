"""Kloosterman sums, the I-Bessel function of order 1, and the exact series
for the Fourier coefficients of F at infinity (including its constant term).

Every modulus c falls into exactly one of the four families in the
coefficient series, indexed by l | 6:

    l = 1: 6 | c          l = 2: 3 | c, c odd
    l = 3: 2 | c, 3 ∤ c    l = 6: gcd(c, 6) = 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import mpf

from .report import BoundReport
from .series import f_weakly_holomorphic_coeffs

BETA = {1: 1, 2: 1, 3: -1, 6: -1}
DIVISORS_OF_6 = (1, 2, 3, 6)


class KloostermanError(ArithmeticError):
    pass


@dataclass(frozen=True)
class KloostermanParams:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("modulus must be positive")


def _residue_counts(a: int, b: int, c: int) -> dict[int, int]:
    counts: dict[int, int] = {}
    for d in range(c):
        if math.gcd(d, c) != 1:
            continue
        k = (a * pow(d, -1, c) + b * d) % c if c > 1 else 0
        counts[k] = counts.get(k, 0) + 1
    return counts


def kloosterman_sum(p: KloostermanParams, precision: int = 53) -> mpf:
    """S(a,b;c) = sum over d mod c, (d,c)=1, of e((a dbar + b d)/c).

    The sum is real; its imaginary part is computed as well and must vanish
    to within 2^(-precision/2).
    """
    counts = _residue_counts(p.a, p.b, p.c)
    if precision <= 53:
        re = math.fsum(m * math.cos(2 * math.pi * k / p.c) for k, m in counts.items())
        im = math.fsum(m * math.sin(2 * math.pi * k / p.c) for k, m in counts.items())
        re, im = mpf(re), mpf(im)
        tol = mpf(2) ** (-precision / 2) * p.c
    else:
        with mpmath.workprec(precision + 10):
            re = mpmath.fsum(m * mpmath.cospi(mpf(2 * k) / p.c) for k, m in counts.items())
            im = mpmath.fsum(m * mpmath.sinpi(mpf(2 * k) / p.c) for k, m in counts.items())
            tol = mpf(2) ** (-precision / 2)
    if abs(im) > tol:
        raise KloostermanError(f"S({p.a},{p.b};{p.c}) has imaginary part {im}")
    return re


def _kloosterman_float(a: int, b: int, c: int) -> float:
    return float(kloosterman_sum(KloostermanParams(a, b, c), 53))


def bessel_I1(x, precision: int = 53) -> mpf:
    """I_1(x) from the ascending series sum (x/2)^{2k+1} / (k! (k+1)!)."""
    with mpmath.workprec(precision + 16):
        x = mpf(x)
        if x < 0:
            raise ValueError("x must be nonnegative")
        if x == 0:
            return mpf(0)
        half = x / 2
        sq = half * half
        term = half
        total = mpf(0)
        eps = mpf(2) ** (-precision - 12)
        k = 0
        while True:
            total += term
            k += 1
            term = term * sq / (k * (k + 1))
            if term < eps * total:
                break
        return +total


def _i1_float(x: float) -> float:
    half = x / 2
    sq = half * half
    term = half
    total = 0.0
    k = 0
    while term > 1e-18 * total or k == 0:
        total += term
        k += 1
        term *= sq / (k * (k + 1))
    return total


def ell_class(c: int) -> int:
    """The l | 6 whose congruence conditions c satisfies."""
    if c % 6 == 0:
        return 1
    if c % 3 == 0:
        return 2
    if c % 2 == 0:
        return 3
    return 6


def admissible(c: int, ell: int) -> bool:
    return c > 0 and c % (6 // ell) == 0 and math.gcd(c, ell) == 1


@dataclass
class CoefficientSeriesState:
    n: int
    c_max: int
    partial: dict[int, float]
    total: float
    history: list[float] = field(default_factory=list, repr=False)


def a_coefficient_series(n: int, c_max: int, precision: int = 53) -> CoefficientSeriesState:
    """Truncation at c <= c_max of
    a(n) = (2 pi / sqrt n) sum_{l | 6} beta(l)/sqrt(l) sum_c S(-lbar, n; c)/c I_1(4 pi sqrt(n) / (c sqrt l)).

    ``history[c-1]`` is the running total after modulus c.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if c_max < 6:
        raise ValueError("c_max must be at least 6")
    partial = {ell: 0.0 for ell in DIVISORS_OF_6}
    history = []
    running = 0.0
    rn = math.sqrt(n)
    for c in range(1, c_max + 1):
        ell = ell_class(c)
        lbar = pow(ell, -1, c) if c > 1 else 0
        if precision <= 53:
            s = _kloosterman_float(-lbar, n, c)
            i1 = _i1_float(4 * math.pi * rn / (c * math.sqrt(ell)))
        else:
            s = float(kloosterman_sum(KloostermanParams(-lbar, n, c), precision))
            i1 = float(bessel_I1(4 * mpmath.pi * rn / (c * mpmath.sqrt(ell)), precision))
        term = 2 * math.pi / rn * BETA[ell] / math.sqrt(ell) * s / c * i1
        partial[ell] += term
        running += term
        history.append(running)
    return CoefficientSeriesState(n, c_max, partial, running, history)


def plateau(state: CoefficientSeriesState, window: float = 0.2, rel_tol: float = 1e-3) -> bool:
    """True when the running total over the last ``window`` fraction of the
    c-range stays within ``rel_tol`` (relative) of its final value."""
    tail = state.history[int(len(state.history) * (1 - window)):]
    scale = max(abs(state.total), 1e-300)
    return (max(tail) - min(tail)) <= rel_tol * scale


def a_coefficient_plateau(n: int, c_start: int = 100, c_limit: int = 3200,
                          window: float = 0.2, rel_tol: float = 1e-3) -> CoefficientSeriesState:
    """Double c_max from ``c_start`` until :func:`plateau` holds.

    Raises RuntimeError if no plateau appears by ``c_limit``.
    """
    c_max = c_start
    while True:
        state = a_coefficient_series(n, c_max)
        if plateau(state, window, rel_tol):
            return state
        if c_max >= c_limit:
            raise RuntimeError(f"no plateau for a({n}) up to c = {c_max}")
        c_max = min(2 * c_max, c_limit)


def mobius_table(n: int) -> list[int]:
    mu = [1] * (n + 1)
    mu[0] = 0
    sieve = bytearray(n + 1)
    for p in range(2, n + 1):
        if sieve[p]:
            continue
        for m in range(p, n + 1, p):
            sieve[m] = 1
            mu[m] = -mu[m]
        for m in range(p * p, n + 1, p * p):
            mu[m] = 0
    return mu


@dataclass(frozen=True)
class B0Result:
    c_max: int
    total: mpf
    per_ell: dict
    tail_bound: mpf


def b0_series(c_max: int, precision: int = 64) -> B0Result:
    """b_F(0) = 4 pi^2 sum_{l | 6} beta(l)/l sum_c mu(c)/c^2, truncated at c_max.

    ``per_ell[l]`` is the inner sum over admissible c; each tail is at most
    sum_{c > c_max} 1/c^2 < 1/c_max.
    """
    if c_max < 6:
        raise ValueError("c_max must be at least 6")
    mu = mobius_table(c_max)
    with mpmath.workprec(precision):
        per_ell = {ell: mpf(0) for ell in DIVISORS_OF_6}
        for c in range(1, c_max + 1):
            if mu[c]:
                per_ell[ell_class(c)] += mpf(mu[c]) / (c * c)
        four_pi2 = 4 * mpmath.pi**2
        total = four_pi2 * mpmath.fsum(mpf(BETA[ell]) / ell * per_ell[ell] for ell in DIVISORS_OF_6)
        tail = four_pi2 * sum(mpf(1) / ell for ell in DIVISORS_OF_6) / c_max
    return B0Result(c_max, total, per_ell, tail)


def b0_closed_forms(precision: int = 64) -> dict:
    """The per-l limits (1/zeta(2)) * {1/24, -1/6, -3/8, 3/2}."""
    with mpmath.workprec(precision):
        inv_z2 = 1 / mpmath.zeta(2)
        return {1: inv_z2 / 24, 2: -inv_z2 / 6, 3: -3 * inv_z2 / 8, 6: 3 * inv_z2 / 2}


def lemma_constant(precision: int = 64) -> mpf:
    """C = 8 sqrt(6) pi^{3/2} + 16 pi^2 zeta(3/2)^2."""
    with mpmath.workprec(precision):
        pi = mpmath.pi
        return 8 * mpmath.sqrt(6) * pi**1.5 + 16 * pi**2 * mpmath.zeta(1.5) ** 2


def coefficient_bound_check(n_max: int, n_min: int = 1, precision: int = 128) -> BoundReport:
    """|c_F(n)| <= C exp(4 pi sqrt n) over n_min..n_max with exact c_F(n)."""
    coeffs = f_weakly_holomorphic_coeffs(n_max)
    rows = []
    passed = True
    with mpmath.workprec(precision):
        C = lemma_constant(precision)
        for n in range(n_min, n_max + 1):
            actual = abs(coeffs[n])
            bound = C * mpmath.exp(4 * mpmath.pi * mpmath.sqrt(n))
            passed &= actual < bound
            rows.append({"n": n, "c_F": coeffs[n], "bound": bound,
                         "ratio": actual / bound, "margin": bound - actual})
    tight = min(rows, key=lambda r: r["margin"])
    worst_ratio = max(rows, key=lambda r: r["ratio"])
    return BoundReport("lemma32", (n_min, n_max), tight["margin"], tight["n"], passed, rows,
                       ("n", "c_F", "bound", "ratio", "margin"),
                       notes=f"largest |c_F(n)|/bound = {mpmath.nstr(worst_ratio['ratio'], 6)} "
                             f"at n={worst_ratio['n']}")
