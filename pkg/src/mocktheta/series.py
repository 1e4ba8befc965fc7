"""Exact integer q-series: partition numbers, the mock theta coefficients
alpha(n), even/odd rank counts, and the coefficients of the level 6 form F.

Everything here is Python ``int`` arithmetic, so no coefficient ever
overflows. Sequences indexed by ``n`` are plain lists aligned with ``n``;
where index 0 has no meaning (alpha and the rank counts) it holds ``None``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

ENUMERATION_CAP = 60


class SeriesError(ArithmeticError):
    """An exactness check inside the series pipeline failed."""


@dataclass(frozen=True)
class IntSeries:
    """Truncated Laurent series ``sum coeffs[i] q^(i + offset)``.

    ``order`` is the largest exponent that is known exactly.
    """

    coeffs: tuple[int, ...]
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def from_terms(cls, terms: dict[int, int], order: int) -> IntSeries:
        lo = min(min(terms, default=0), 0)
        coeffs = [0] * (order - lo + 1)
        for e, c in terms.items():
            if e <= order:
                coeffs[e - lo] += c
        return cls(tuple(coeffs), lo)

    @property
    def order(self) -> int:
        return self.offset + len(self.coeffs) - 1

    def __getitem__(self, exponent: int) -> int:
        i = exponent - self.offset
        if exponent > self.order:
            raise IndexError(f"q^{exponent} is beyond the truncation order {self.order}")
        return self.coeffs[i] if i >= 0 else 0

    def truncate(self, order: int) -> IntSeries:
        return IntSeries(self.coeffs[: max(order - self.offset + 1, 0)], self.offset)

    def _aligned(self, other: IntSeries):
        lo = min(self.offset, other.offset)
        hi = min(self.order, other.order)
        a = [self[e] for e in range(lo, hi + 1)]
        b = [other[e] for e in range(lo, hi + 1)]
        return lo, a, b

    def __add__(self, other: IntSeries) -> IntSeries:
        lo, a, b = self._aligned(other)
        return IntSeries(tuple(x + y for x, y in zip(a, b)), lo)

    def __sub__(self, other: IntSeries) -> IntSeries:
        lo, a, b = self._aligned(other)
        return IntSeries(tuple(x - y for x, y in zip(a, b)), lo)

    def __neg__(self) -> IntSeries:
        return IntSeries(tuple(-c for c in self.coeffs), self.offset)

    def scale(self, k: int) -> IntSeries:
        return IntSeries(tuple(k * c for c in self.coeffs), self.offset)

    def shift(self, k: int) -> IntSeries:
        """Multiply by q^k; the relative truncation is kept."""
        return IntSeries(self.coeffs, self.offset + k)

    def __mul__(self, other: IntSeries) -> IntSeries:
        offset = self.offset + other.offset
        # known exactly up to min(ord_a + val_b, ord_b + val_a)
        order = min(self.order + other.offset, other.order + self.offset)
        n = order - offset + 1
        out = [0] * n
        b = other.coeffs
        sparse_b = [(j, c) for j, c in enumerate(b[:n]) if c]
        for i, a in enumerate(self.coeffs[:n]):
            if not a:
                continue
            for j, c in sparse_b:
                if i + j >= n:
                    break
                out[i + j] += a * c
        return IntSeries(tuple(out), offset)

    def compose_power(self, k: int) -> IntSeries:
        """Substitute q -> q^k (k >= 1)."""
        if k < 1:
            raise ValueError("k must be positive")
        # the first unknown term q^(order+1) moves to q^(k*(order+1))
        out = [0] * (len(self.coeffs) * k)
        out[::k] = self.coeffs
        return IntSeries(tuple(out), self.offset * k)

    def divide(self, unit: IntSeries) -> IntSeries:
        """Exact quotient by a power series whose constant term is +-1.

        Uses the coefficient recurrence, which only touches the nonzero
        terms of the divisor, so sparse divisors are cheap.
        """
        if unit.offset != 0 or unit.coeffs[0] not in (1, -1):
            raise SeriesError("divisor must be a power series with constant term +-1")
        order = min(self.order, unit.order + self.offset)
        n = order - self.offset + 1
        lead = unit.coeffs[0]
        taps = [(j, c) for j, c in enumerate(unit.coeffs[1:n], start=1) if c]
        out = [0] * n
        a = self.coeffs
        for k in range(n):
            acc = a[k]
            for j, c in taps:
                if j > k:
                    break
                acc -= c * out[k - j]
            out[k] = acc * lead
        return IntSeries(tuple(out), self.offset)

    def inverse(self) -> IntSeries:
        one = IntSeries((1,) + (0,) * (len(self.coeffs) - 1))
        return one.divide(self)


def euler_product(order: int) -> IntSeries:
    """prod_{k>=1} (1 - q^k) via the pentagonal number theorem."""
    terms = {0: 1}
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 > order:
            break
        sign = -1 if k % 2 else 1
        terms[e1] = sign
        e2 = k * (3 * k + 1) // 2
        if e2 <= order:
            terms[e2] = sign
        k += 1
    return IntSeries.from_terms(terms, order)


def partition_counts(n_max: int) -> list[int]:
    """p(0), ..., p(n_max) by Euler's pentagonal recurrence."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    p = [0] * (n_max + 1)
    p[0] = 1
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def mock_theta_coeffs(n_max: int) -> list:
    """alpha(n) for 1 <= n <= n_max from f(q) = sum q^{m^2} / (-q;q)_m^2.

    Returns a list indexed by n; entry 0 is ``None``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    acc = [0] * (n_max + 1)
    g = IntSeries((1,) + (0,) * n_max)  # 1/(-q;q)_m^2, starts at m = 0
    m = 1
    while m * m <= n_max:
        width = n_max - m * m
        g = g.truncate(width)
        factor = IntSeries.from_terms({0: 1, m: 2, 2 * m: 1}, width)
        g = g.divide(factor)
        for i, c in enumerate(g.coeffs):
            acc[m * m + i] += c
        m += 1
    out: list = acc
    out[0] = None
    return out


@dataclass(frozen=True)
class RankTable:
    """p(n), alpha(n) and N(r,2;n) for 1 <= n <= n_max (index-aligned lists)."""

    n_max: int
    p: tuple
    alpha: tuple
    N0: tuple
    N1: tuple

    def N(self, r: int, n: int) -> int:
        """N(r,2;n); n = 0 is the empty partition, which has no rank."""
        if r not in (0, 1):
            raise ValueError("r must be 0 or 1")
        return (self.N0 if r == 0 else self.N1)[n]


def rank_counts(n_max: int) -> RankTable:
    p = partition_counts(n_max)
    alpha = mock_theta_coeffs(n_max)
    n0: list = [None] * (n_max + 1)
    n1: list = [None] * (n_max + 1)
    for n in range(1, n_max + 1):
        even, odd = p[n] + alpha[n], p[n] - alpha[n]
        if even % 2 or odd % 2:
            raise SeriesError(f"p({n}) and alpha({n}) have different parity")
        n0[n], n1[n] = even // 2, odd // 2
        if n0[n] < 0 or n1[n] < 0:
            raise SeriesError(f"negative rank count at n={n}")
    return RankTable(n_max, tuple(p), tuple(alpha), tuple(n0), tuple(n1))


_table_lock = threading.Lock()
_largest_table: RankTable | None = None


def rank_table(n_max: int) -> RankTable:
    """Shared :func:`rank_counts` result covering at least ``n_max``.

    Tables are immutable, so one large table serves every smaller request.
    """
    global _largest_table
    with _table_lock:
        if _largest_table is None or _largest_table.n_max < n_max:
            _largest_table = rank_counts(n_max)
        return _largest_table


# -- brute-force oracles ---------------------------------------------------

def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """All partitions of n as nonincreasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def partition_rank(parts: Sequence[int]) -> int:
    return max(parts) - len(parts)


@lru_cache(maxsize=None)
def rank_histogram(n: int) -> dict[int, int]:
    """Number of partitions of n with each rank, by walking every partition.

    The walk visits each partition once; a tail of ones is closed out in a
    single step since it cannot branch.
    """
    hist: dict[int, int] = {}

    def walk(remaining: int, max_part: int, nparts: int, largest: int) -> None:
        if remaining == 0:
            r = largest - nparts
            hist[r] = hist.get(r, 0) + 1
            return
        if max_part == 1:
            r = largest - (nparts + remaining)
            hist[r] = hist.get(r, 0) + 1
            return
        for part in range(min(remaining, max_part), 0, -1):
            walk(remaining - part, part, nparts + 1, largest)

    for largest in range(n, 0, -1):
        walk(n - largest, largest, 1, largest)
    return hist


def rank_count_brute(r: int, t: int, n: int, cap: int = ENUMERATION_CAP) -> int:
    """N(r,t;n) by exhaustive enumeration of the partitions of n."""
    if t < 2 or not 0 <= r < t:
        raise ValueError("need t >= 2 and 0 <= r < t")
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap {cap}")
    return sum(c for rank, c in rank_histogram(n).items() if rank % t == r)


def sigma3(k: int) -> int:
    if k < 1:
        raise ValueError("k must be positive")
    total = 0
    for d in range(1, math.isqrt(k) + 1):
        if k % d == 0:
            e = k // d
            total += d**3 + (e**3 if e != d else 0)
    return total


def sigma3_table(k_max: int) -> list[int]:
    """sigma_3(0..k_max) by a divisor sieve (entry 0 is 0)."""
    s = [0] * (k_max + 1)
    for d in range(1, k_max + 1):
        cube = d**3
        for m in range(d, k_max + 1, d):
            s[m] += cube
    return s


def eisenstein_e4(order: int) -> IntSeries:
    s = sigma3_table(order)
    return IntSeries((1,) + tuple(240 * s[k] for k in range(1, order + 1)))


def f_weakly_holomorphic_coeffs(n_max: int) -> IntSeries:
    """c_F(-1), ..., c_F(n_max) for
    F = -(1/40)(E4(z) + 4E4(2z) - 9E4(3z) - 36E4(6z)) / (eta(z)eta(2z)eta(3z)eta(6z))^2.

    The eta product is q * prod (1-q^k)^2 (1-q^2k)^2 (1-q^3k)^2 (1-q^6k)^2.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    order = n_max + 1
    e4 = eisenstein_e4(order)
    num = e4
    for m, w in ((2, 4), (3, -9), (6, -36)):
        num = num + e4.compose_power(m).truncate(order).scale(w)
    quotient = num
    for m in (1, 2, 3, 6):
        euler = euler_product(order // m).compose_power(m).truncate(order)
        quotient = quotient.divide(euler).divide(euler)
    coeffs = []
    for c in quotient.coeffs:
        if c % 40:
            raise SeriesError("the 1/40 normalisation of F is not exact")
        coeffs.append(-c // 40)
    return IntSeries(tuple(coeffs), -1)
