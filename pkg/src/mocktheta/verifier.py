"""Finite-range checks of the effective bounds for alpha(n), p(n) and the
even/odd rank counts, of the convexity inequality, and of the maximal
multiplicative products maxN(r,2;n).

Every check returns a :class:`~mocktheta.report.BoundReport`. Inequalities
between integers are decided in exact arithmetic; real-valued sides are
evaluated with mpmath at 256 bits unless stated otherwise.
"""

from __future__ import annotations

import math
import os
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mpf

from .modular import (
    CertificationError,
    PrecisionPolicy,
    error_term,
    l_of,
    main_term,
    trace_S,
)
from .report import BoundReport
from .series import RankTable, partitions, rank_table

PREC = 256
THREADS_ENV = "MOCKTHETA_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def parallel_map(func, items, threads: int | None = None) -> list:
    """Order-preserving map, in worker processes when threads > 1."""
    items = list(items)
    threads = default_threads() if threads is None else threads
    if threads <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * threads))))


def M_of(n, prec: int = PREC) -> mpf:
    """M(n) = sqrt(3)/(24n - 1) * (1 - 1/l(n)); n may be real."""
    with mpmath.workprec(prec):
        return mpmath.sqrt(3) / (24 * mpf(n) - 1) * (1 - 1 / l_of(n, prec))


def _finish(claim, lo, hi, rows, columns, margin_key="margin", location_key="n",
            passed=None, notes="", failures=None) -> BoundReport:
    if rows:
        worst = min(rows, key=lambda r: r[margin_key])
        margin, where = worst[margin_key], worst[location_key]
    else:
        margin, where = None, None
    if passed is None:
        passed = bool(rows) and all(r["ok"] for r in rows)
    return BoundReport(claim, (lo, hi), margin, where, passed, rows, columns, notes,
                       failures or [])


# -- alpha(n): main term and error bound -----------------------------------

def verify_theorem_main(n_max: int, n_min: int = 1, table: RankTable | None = None) -> BoundReport:
    """|alpha(n) - main_term(n)| < 4.30e23 2^{q(n)} |D_n|^2 e^{l(n)/3}."""
    table = table or rank_table(n_max)
    rows = []
    with mpmath.workprec(PREC):
        for n in range(n_min, n_max + 1):
            alpha = table.alpha[n]
            main = main_term(n, PREC)
            E = alpha - main
            bound = error_term(n, PREC)
            margin = bound - abs(E)
            rows.append({"n": n, "alpha": alpha, "main": main, "E": E, "bound": bound,
                         "margin": margin, "ok": abs(E) < bound})
    return _finish("theorem", n_min, n_max, rows, ("n", "alpha", "main", "E", "bound", "margin"))


def alpha_errors(n_max: int, table: RankTable | None = None) -> list:
    """E(n) = alpha(n) - main_term(n) for 1 <= n <= n_max (index-aligned)."""
    table = table or rank_table(n_max)
    with mpmath.workprec(PREC):
        return [None] + [table.alpha[n] - main_term(n, PREC) for n in range(1, n_max + 1)]


# -- p(n) and the rank counts ----------------------------------------------

def partition_main(n, prec: int = PREC) -> mpf:
    """(2 sqrt 3 / (24n - 1)) (1 - 1/l(n)) e^{l(n)}."""
    with mpmath.workprec(prec):
        return 2 * M_of(n, prec) * mpmath.exp(l_of(n, prec))


def verify_partition_error(n_max: int, n_min: int = 1, table: RankTable | None = None) -> BoundReport:
    """|p(n) - partition_main(n)| <= 1313 e^{l(n)/2}."""
    table = table or rank_table(n_max)
    rows = []
    with mpmath.workprec(PREC):
        for n in range(n_min, n_max + 1):
            l = l_of(n, PREC)
            Ep = table.p[n] - partition_main(n)
            bound = 1313 * mpmath.exp(l / 2)
            rows.append({"n": n, "p": table.p[n], "E_p": Ep, "bound": bound,
                         "margin": bound - abs(Ep), "ok": abs(Ep) <= bound})
    return _finish("partition", n_min, n_max, rows, ("n", "p", "E_p", "bound", "margin"))


def verify_partition_lower(n_max: int, n_min: int = 4, table: RankTable | None = None) -> BoundReport:
    """p(n) > (sqrt 3 / 12n)(1 - 1/sqrt n) e^{l(n)}."""
    table = table or rank_table(n_max)
    rows = []
    with mpmath.workprec(PREC):
        for n in range(n_min, n_max + 1):
            lower = mpmath.sqrt(3) / (12 * n) * (1 - 1 / mpmath.sqrt(n)) * mpmath.exp(l_of(n, PREC))
            p = table.p[n]
            rows.append({"n": n, "p": p, "lower": lower, "margin": (p - lower) / p,
                         "ok": p > lower})
    return _finish("partition_lower", n_min, n_max, rows, ("n", "p", "lower", "margin"),
                   notes="margin is (p - lower)/p")


def rank_residuals(n: int, table: RankTable) -> tuple[mpf, mpf]:
    """R_r(n) = (-1)^r (N(r,2;n) - M(n) e^{l(n)}) for r = 0, 1."""
    with mpmath.workprec(PREC):
        main = M_of(n) * mpmath.exp(l_of(n, PREC))
        return table.N0[n] - main, main - table.N1[n]


def verify_corollaries(n_max: int, n_min: int = 4, table: RankTable | None = None) -> BoundReport:
    """|R_r(n)| <= 8.17e30 e^{l/2} for r = 0, 1 and |alpha/2p| <= 1.89e32 e^{-l/3}.

    The two residuals are checked separately: they differ by E_p(n), so a
    single R(n) cannot serve both parities.
    """
    table = table or rank_table(n_max)
    rows = []
    with mpmath.workprec(PREC):
        for n in range(n_min, n_max + 1):
            l = l_of(n, PREC)
            R0, R1 = rank_residuals(n, table)
            bound_R = mpf("8.17e30") * mpmath.exp(l / 2)
            R2 = Fraction(table.alpha[n], 2 * table.p[n])
            if Fraction(table.N0[n], table.p[n]) - Fraction(1, 2) != R2:
                raise ArithmeticError(f"N(0,2;{n})/p({n}) - 1/2 != alpha/2p")
            bound_R2 = mpf("1.89e32") * mpmath.exp(-l / 3)
            R2f = mpf(R2.numerator) / R2.denominator
            margin_R = bound_R - max(abs(R0), abs(R1))
            margin_R2 = bound_R2 - abs(R2f)
            # both margins in units of their bounds so one minimum is meaningful
            rel = min(margin_R / bound_R, margin_R2 / bound_R2)
            rows.append({"n": n, "R0": R0, "R1": R1, "bound_R": bound_R, "R2": R2f,
                         "bound_R2": bound_R2, "margin": rel,
                         "ok": max(abs(R0), abs(R1)) <= bound_R and abs(R2f) <= bound_R2})
    return _finish("corollaries", n_min, n_max, rows,
                   ("n", "R0", "R1", "bound_R", "R2", "bound_R2", "margin"),
                   notes="margin is the smaller relative slack of the two bounds")


# -- sandwich bounds on N(r,2;n) -------------------------------------------

SANDWICH_START = {0: 8, 1: 7}
SANDWICH_CONSTANT = mpf("8.17e30")


def sandwich_condition(n: int) -> bool:
    """8.17e30 < (M(n)/sqrt n) e^{l(n)/2}, which makes the sandwich automatic."""
    with mpmath.workprec(PREC):
        return SANDWICH_CONSTANT < M_of(n) / mpmath.sqrt(n) * mpmath.exp(l_of(n, PREC) / 2)


def sandwich_threshold(n_hi: int) -> int | None:
    """First n <= n_hi at which the analytic condition holds, or None.

    Also checks it keeps holding from there to n_hi.
    """
    first = None
    for n in range(1, n_hi + 1):
        ok = sandwich_condition(n)
        if ok and first is None:
            first = n
        elif not ok and first is not None:
            raise ArithmeticError(f"analytic condition holds at {first} but fails at {n}")
    return first


def verify_sandwich(n_max: int, table: RankTable | None = None,
                    scan_threshold: bool = True) -> BoundReport:
    """M(n)(1 - 1/sqrt n) e^l < N(r,2;n) < M(n)(1 + 1/sqrt n) e^l for
    n >= 8 (r = 0) and n >= 7 (r = 1)."""
    table = table or rank_table(n_max)
    rows = []
    failures = []
    with mpmath.workprec(PREC):
        for n in range(1, n_max + 1):
            main = M_of(n) * mpmath.exp(l_of(n, PREC))
            width = main / mpmath.sqrt(n)
            for r in (0, 1):
                N = table.N(r, n)
                slack = min(N - (main - width), (main + width) - N) / main
                ok = main - width < N < main + width
                if n < SANDWICH_START[r]:
                    if not ok:
                        failures.append((r, n))
                    continue
                rows.append({"r": r, "n": n, "N": N, "lower": main - width,
                             "upper": main + width, "margin": slack, "ok": ok})
    notes = f"below-threshold failures (r, n): {failures}; margin relative to M(n)e^l(n)"
    threshold = None
    if scan_threshold:
        threshold = sandwich_threshold(n_max)
        notes += f"; analytic condition first holds at n={threshold}"
    report = _finish("sandwich", 1, n_max, rows, ("r", "n", "N", "lower", "upper", "margin"),
                     notes=notes, failures=failures)
    report.threshold = threshold
    return report


# -- convexity --------------------------------------------------------------

CONVEXITY_START = {0: 11, 1: 12}


def T_of(a, C, prec: int = PREC) -> mpf:
    with mpmath.workprec(prec):
        a, C = mpf(a), mpf(C)
        return l_of(a, prec) + l_of(C * a, prec) - l_of(a + C * a, prec)


def S_of(a, C, prec: int = PREC) -> mpf:
    with mpmath.workprec(prec):
        a, C = mpf(a), mpf(C)
        return (1 + 1 / mpmath.sqrt(a + C * a)) / (
            (1 - 1 / mpmath.sqrt(a)) * (1 - 1 / mpmath.sqrt(C * a)))


def frontier_gap(a, C, prec: int = PREC) -> mpf:
    """T_a(C) - log S_a(C) + log M(a); positive means the analytic argument covers b = Ca."""
    with mpmath.workprec(prec):
        return T_of(a, C, prec) - mpmath.log(S_of(a, C, prec)) + mpmath.log(M_of(a, prec))


def convexity_analytic(a) -> tuple[mpf, mpf]:
    """(T_a(1), log S_a(1) - log M(a)); the first exceeding the second is the
    sufficient condition for every b >= a."""
    with mpmath.workprec(PREC):
        return T_of(a, 1), mpmath.log(S_of(a, 1)) - mpmath.log(M_of(a))


@dataclass(frozen=True)
class ConvexityFrontier:
    a: int
    C_a: mpf
    max_b: int

    @property
    def C_a_truncated(self) -> str:
        """C_a cut (not rounded) to two decimals."""
        cut = int(mpmath.floor(self.C_a * 100))
        return f"{cut // 100}.{cut % 100:02d}"


def find_Ca(a: int, lo=1, hi=16, tol=mpf("1e-9")) -> ConvexityFrontier:
    """Root of frontier_gap(a, C) on [lo, hi] by bisection."""
    if not 11 <= a <= 17:
        raise ValueError("C_a is only tabulated for 11 <= a <= 17")
    with mpmath.workprec(PREC):
        lo, hi = mpf(lo), mpf(hi)
        g_lo, g_hi = frontier_gap(a, lo), frontier_gap(a, hi)
        if not (g_lo < 0 < g_hi):
            raise ValueError(f"no sign change of the frontier gap for a={a} on [{lo}, {hi}]")
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if frontier_gap(a, mid) < 0:
                lo = mid
            else:
                hi = mid
        C = (lo + hi) / 2
        return ConvexityFrontier(a, C, int(mpmath.floor(C * a)))


def table3() -> list[ConvexityFrontier]:
    return [find_Ca(a) for a in range(11, 18)]


def monotonicity_check(a_values=range(11, 18), grid=None) -> bool:
    """T_a increasing and S_a decreasing in C on a grid over [1, 3]."""
    grid = grid or [1 + k / 50 for k in range(101)]
    for a in a_values:
        Ts = [T_of(a, C) for C in grid]
        Ss = [S_of(a, C) for C in grid]
        if any(x >= y for x, y in zip(Ts, Ts[1:])) or any(x <= y for x, y in zip(Ss, Ss[1:])):
            return False
    return True


def verify_final_inequality(a_max: int = 5000, a_min: int = 18, grid_max: int = 10**6,
                            grid_points: int = 200) -> BoundReport:
    """T_a(1) > log S_a(1) - log M(a) for every integer a_min..a_max, then on
    a log-spaced grid of integers up to grid_max."""
    ints = list(range(a_min, a_max + 1))
    grid = []
    if grid_max > a_max:
        ratio = (grid_max / a_max) ** (1 / grid_points)
        grid = sorted({int(round(a_max * ratio**k)) for k in range(1, grid_points + 1)} - set(ints))
    rows = []
    for a in ints + grid:
        lhs, rhs = convexity_analytic(a)
        rows.append({"a": a, "T": lhs, "rhs": rhs, "margin": lhs - rhs, "ok": lhs > rhs,
                     "sampled": a > a_max})
    notes = f"all integers {a_min}..{a_max}"
    if grid:
        notes += f"; sampled beyond {a_max} at {len(grid)} log-spaced points up to {grid_max}"
    return _finish("final-ineq", a_min, max(a_max, grid_max), rows,
                   ("a", "T", "rhs", "margin", "sampled"), location_key="a", notes=notes)


def convexity_exact(max_sum: int, table: RankTable | None = None) -> BoundReport:
    """N(r,2;a) N(r,2;b) > N(r,2;a+b) for a, b >= 11 (r = 0) / 12 (r = 1),
    a + b <= max_sum, decided in exact integers.

    Rows give, per (r, a), the tightest b; the margin is
    log(N(a)N(b)) - log(N(a+b)). Failing pairs below the thresholds are
    collected in ``failures`` as (r, a, b) with a <= b.
    """
    table = table or rank_table(max_sum)
    rows = []
    failures = []
    passed = True
    for r in (0, 1):
        N = table.N0 if r == 0 else table.N1
        start = CONVEXITY_START[r]
        for a in range(1, max_sum // 2 + 1):
            best = None
            for b in range(a, max_sum - a + 1):
                lhs, rhs = N[a] * N[b], N[a + b]
                ok = lhs > rhs
                if a < start:
                    if not ok:
                        failures.append((r, a, b))
                    continue
                passed &= ok
                margin = (math.log(lhs) if lhs else -math.inf) - math.log(rhs)
                if best is None or margin < best[0]:
                    best = (margin, b, ok)
            if best is not None:
                rows.append({"r": r, "a": a, "b": best[1], "margin": mpf(best[0]), "ok": best[2]})
    report = _finish("convexity", 1, max_sum, rows, ("r", "a", "b", "margin"),
                     location_key="a", passed=passed and bool(rows), failures=failures,
                     notes=f"{len(failures)} failing pairs below the thresholds")
    return report


def sub_threshold_failures(max_sum: int, table: RankTable | None = None) -> list[tuple]:
    return convexity_exact(max_sum, table).failures


# -- maximal multiplicative products ---------------------------------------

MAXN_START = {0: 5, 1: 8}
SUBSTITUTION_BLOCKS = (((2, 2), (4,)), ((2, 2, 2), (6,)))


def value_of(parts, r: int, table: RankTable) -> int:
    v = 1
    for i in parts:
        v *= table.N(r, i)
    return v


def closed_form_maxn(r: int, n: int) -> tuple[int, tuple[int, ...]]:
    """The conjectured maximum and canonical maximizer (nonincreasing)."""
    if r == 0:
        if n < 5:
            raise ValueError("closed form for r = 0 needs n >= 5")
        k, m = divmod(n, 3)
        if m == 0:
            return 3**k, (3,) * k
        if m == 1:
            return 11 * 3 ** ((n - 7) // 3), (7,) + (3,) * ((n - 7) // 3)
        return 5 * 3 ** ((n - 5) // 3), (5,) + (3,) * ((n - 5) // 3)
    if n < 8:
        raise ValueError("closed form for r = 1 needs n >= 8")
    if n % 2 == 0:
        return 2 ** (n // 2), (2,) * (n // 2)
    return 12 * 2 ** ((n - 9) // 2), (9,) + (2,) * ((n - 9) // 2)


def substitution_closure(parts) -> frozenset:
    """All partitions reachable by (2,2) <-> (4) and (2,2,2) <-> (6)."""
    start = tuple(sorted(parts, reverse=True))
    seen = {start}
    queue = deque([start])
    while queue:
        lam = queue.popleft()
        for small, big in SUBSTITUTION_BLOCKS:
            for src, dst in ((small, big), (big, small)):
                rest = list(lam)
                try:
                    for x in src:
                        rest.remove(x)
                except ValueError:
                    continue
                new = tuple(sorted(rest + list(dst), reverse=True))
                if new not in seen:
                    seen.add(new)
                    queue.append(new)
    return frozenset(seen)


@dataclass(frozen=True)
class MaxNResult:
    r: int
    n: int
    value: int
    count: int
    maximizers: frozenset | None
    canonical: tuple[int, ...]


def maxn_dp(r: int, n_max: int, sets_upto: int = 40,
            table: RankTable | None = None) -> list[MaxNResult]:
    """best(n) = max_i N(r,2;i) best(n - i), with maximizer counts for all n
    and maximizer sets (as nonincreasing tuples) for n <= sets_upto.

    Entry 0 of the returned list is the empty partition.
    """
    table = table or rank_table(max(n_max, 1))
    Nr = [1] + [table.N(r, i) for i in range(1, n_max + 1)]
    best = [1] + [0] * n_max
    for n in range(1, n_max + 1):
        best[n] = max(Nr[i] * best[n - i] for i in range(1, n + 1))

    # counts[n][j]: maximizers of n whose parts are all <= j
    counts = [[1] * (n_max + 1)]
    for n in range(1, n_max + 1):
        if best[n] == 0:
            counts.append([None] * (n_max + 1))
            continue
        row = [0] * (n_max + 1)
        running = 0
        for j in range(1, n_max + 1):
            if j <= n and Nr[j] and Nr[j] * best[n - j] == best[n]:
                sub = counts[n - j]
                running += sub[min(j, n - j)] if sub[0] is not None else 0
            row[j] = running
        counts.append(row)

    sets: dict[int, frozenset] = {0: frozenset({()})}

    def maximizer_set(n: int) -> frozenset:
        if n in sets:
            return sets[n]
        if best[n] == 0:
            result = frozenset(partitions(n))
        else:
            out = set()
            for i in range(1, n + 1):
                if Nr[i] and Nr[i] * best[n - i] == best[n]:
                    for lam in maximizer_set(n - i):
                        out.add(tuple(sorted(lam + (i,), reverse=True)))
            result = frozenset(out)
        sets[n] = result
        return result

    results = []
    for n in range(0, n_max + 1):
        mset = maximizer_set(n) if n <= sets_upto else None
        if n == 0:
            count = 1
        elif best[n] == 0:
            count = table.p[n]
        else:
            count = counts[n][n]
        if n >= MAXN_START[r]:
            canonical = closed_form_maxn(r, n)[1]
        elif mset is not None:
            canonical = min(mset)
        else:
            canonical = ()
        results.append(MaxNResult(r, n, best[n], count, mset, canonical))
    return results


def maxn_bruteforce(r: int, n: int, table: RankTable) -> tuple[int, frozenset]:
    """Maximum and maximizers by visiting every partition of n."""
    best, arg = -1, set()
    for lam in partitions(n):
        v = value_of(lam, r, table)
        if v > best:
            best, arg = v, {lam}
        elif v == best:
            arg.add(lam)
    return best, frozenset(arg)


def _closure_size(n: int) -> int:
    """Partitions of n into parts from {1,2,3} (size of the r = 1 closure of 2^n)."""
    ways = [1] + [0] * n
    for part in (1, 2, 3):
        for m in range(part, n + 1):
            ways[m] += ways[m - part]
    return ways[n]


def verify_maxn(n_max: int, table: RankTable | None = None, sets_upto: int = 40) -> BoundReport:
    """Closed forms for maxN(0,2;n), n >= 5, and maxN(1,2;n), n >= 8, with
    uniqueness for r = 0 and the substitution-closure description for r = 1."""
    table = table or rank_table(max(n_max, 1))
    rows = []
    for r in (0, 1):
        results = maxn_dp(r, n_max, sets_upto, table)
        for res in results[MAXN_START[r]:]:
            value, canonical = closed_form_maxn(r, res.n)
            checks = [res.value == value, value_of(canonical, r, table) == res.value]
            if r == 0:
                checks.append(res.count == 1)
            else:
                checks.append(res.count == _count_r1_closure(canonical))
                if res.maximizers is not None:
                    checks.append(res.maximizers == substitution_closure(canonical))
            ok = all(checks)
            rows.append({"r": r, "n": res.n, "maxN": res.value, "closed_form": value,
                         "count": res.count, "canonical": canonical,
                         "margin": mpf(1 if ok else -1), "ok": ok})
    return _finish("maxn", 1, n_max, rows, ("r", "n", "maxN", "closed_form", "count", "canonical"),
                   notes="margin is +1 per passing row, -1 per failing row")


def _count_r1_closure(canonical: tuple[int, ...]) -> int:
    # the 2s regroup freely into 2s, 4s and 6s; the 9 (if any) is fixed
    return _closure_size(canonical.count(2))


# Table 4 exactly as printed (r -> n -> (maxN, listed partitions)).
TABLE4_PRINTED = {
    0: {
        1: (1, [(1,)]), 2: (1, [(1, 1)]), 3: (3, [(3,)]), 4: (3, [(1, 3)]),
        5: (5, [(5,)]), 6: (9, [(3, 3)]), 7: (11, [(7,)]), 8: (15, [(3, 5)]),
        9: (27, [(3, 3, 3)]), 10: (33, [(3, 7)]), 11: (45, [(3, 3, 5)]),
        12: (81, [(3, 3, 3, 3)]), 13: (99, [(3, 3, 7)]), 14: (135, [(3, 3, 3, 5)]),
        15: (243, [(3,) * 5]), 16: (297, [(3, 3, 3, 7)]), 17: (405, [(3, 3, 3, 3, 5)]),
        18: (729, [(3,) * 6]), 19: (891, [(3, 3, 3, 3, 7)]), 20: (1215, [(3,) * 5 + (5,)]),
        21: (2187, [(3,) * 7]), 22: (2673, [(3,) * 5 + (7,)]), 23: (3645, [(3,) * 6 + (5,)]),
    },
    1: {
        1: (0, [(1,)]), 2: (2, [(2,)]), 3: (0, [(3,), (1, 2), (1, 1, 1)]),
        4: (4, [(4,), (2, 2)]), 5: (2, [(5,)]), 6: (8, [(6,), (2, 4), (2, 2, 2)]),
        7: (4, [(7,), (2, 5)]), 8: (16, [(2,) * 4]), 9: (12, [(9,)]),
        10: (32, [(2,) * 5]), 11: (24, [(2, 9)]), 12: (64, [(2,) * 6]),
        13: (48, [(2, 2, 9)]), 14: (128, [(2,) * 7]), 15: (96, [(2, 2, 2, 9)]),
        16: (256, [(2,) * 8]), 17: (192, [(2,) * 5 + (9,)]), 18: (512, [(2,) * 10]),
        19: (384, [(2,) * 5 + (9,)]), 20: (1024, [(2,) * 11]), 21: (768, [(2,) * 6 + (9,)]),
        22: (2048, [(2,) * 12]), 23: (1536, [(2,) * 7 + (9,)]),
    },
}

# Rows whose printed partition does not sum to n; the number of 2s is off by one.
TABLE4_CORRECTIONS = {
    (1, 17): [(2,) * 4 + (9,)],
    (1, 18): [(2,) * 9],
    (1, 20): [(2,) * 10],
    (1, 22): [(2,) * 11],
}


def table4_reference() -> dict:
    """Table 4 with the misprinted partitions replaced."""
    out = {r: dict(rows) for r, rows in TABLE4_PRINTED.items()}
    for (r, n), parts in TABLE4_CORRECTIONS.items():
        out[r][n] = (out[r][n][0], parts)
    return out


def table4_rows(n_max: int = 23, table: RankTable | None = None) -> list[dict]:
    table = table or rank_table(max(n_max, 1))
    res = {r: maxn_dp(r, n_max, n_max, table) for r in (0, 1)}
    rows = []
    for n in range(1, n_max + 1):
        row = {"n": n}
        for r in (0, 1):
            m = res[r][n]
            row[f"maxN{r}"] = m.value
            row[f"maximizers{r}"] = ";".join(
                "(" + ",".join(map(str, sorted(lam))) + ")" for lam in sorted(m.maximizers))
        rows.append(row)
    return rows


def verify_table4(table: RankTable | None = None) -> BoundReport:
    """Table 4 values and maximizer sets for n <= 23.

    r = 1 rows list representatives up to the (2,2) <-> (4), (2,2,2) <-> (6)
    substitutions, so the expected set is the union of their closures.
    """
    table = table or rank_table(23)
    ref = table4_reference()
    rows = []
    for r in (0, 1):
        res = maxn_dp(r, 23, 23, table)
        for n in range(1, 24):
            value, listed = ref[r][n]
            listed = [tuple(sorted(p, reverse=True)) for p in listed]
            if r == 1:
                expected = frozenset().union(*(substitution_closure(p) for p in listed))
            else:
                expected = frozenset(listed)
            ok = res[n].value == value and res[n].maximizers == expected
            rows.append({"r": r, "n": n, "maxN": res[n].value, "table": value,
                         "margin": mpf(1 if ok else -1), "ok": ok})
    return _finish("table4", 1, 23, rows, ("r", "n", "maxN", "table", "margin"),
                   notes="rows (r=1, n=17,18,20,22) use corrected partitions")


# -- substitution audit ----------------------------------------------------

# (r, before, after, relation) with relation '>' (after strictly larger) or '='
SUBSTITUTIONS = [
    (0, (1, 1, 1), (3,), ">"), (0, (2,), (1, 1), ">"), (0, (4,), (1, 3), ">"),
    (0, (5, 5), (3, 7), ">"), (0, (6,), (3, 3), ">"), (0, (7, 7), (3, 3, 3, 5), ">"),
    (0, (8,), (3, 5), ">"), (0, (9,), (3, 3, 3), ">"),
    (1, (1, 1, 1, 1), (4,), ">"), (1, (3, 3), (2, 2, 2), ">"), (1, (4,), (2, 2), "="),
    (1, (5, 5), (2,) * 5, ">"), (1, (6,), (2, 2, 2), "="), (1, (7, 7), (2,) * 7, ">"),
    (1, (8,), (2, 2, 2, 2), ">"), (1, (9, 9), (2,) * 9, ">"),
    (1, (2, 5), (7,), "="),
    (0, (1, 3, 3), (7,), ">"), (0, (1, 1, 3), (5,), ">"),
    (1, (1, 2, 2), (5,), ">"), (1, (1, 1), (2,), ">"), (1, (1, 1, 1, 2), (5,), ">"),
]


def substitution_audit(table: RankTable | None = None, split_max: int = 500) -> BoundReport:
    table = table or rank_table(split_max)
    ref = table4_reference()
    rows = []
    for r, before, after, rel in SUBSTITUTIONS:
        v0, v1 = value_of(before, r, table), value_of(after, r, table)
        ok = v1 > v0 if rel == ">" else v1 == v0
        rows.append({"kind": "listed", "r": r, "i": f"{before}->{after}", "before": v0,
                     "after": v1, "margin": mpf(v1 - v0) if rel == ">" else mpf(1 if ok else -1),
                     "ok": ok})
    for r in (0, 1):
        for i in range(24, split_max + 1):
            v0 = table.N(r, i)
            v1 = table.N(r, i // 2) * table.N(r, i - i // 2)
            rows.append({"kind": "split", "r": r, "i": i, "before": v0, "after": v1,
                         "margin": mpf(v1 - v0), "ok": v1 > v0})
        for i in range(10, 24):
            v0 = table.N(r, i)
            v1 = value_of(ref[r][i][1][0], r, table)
            rows.append({"kind": "table4", "r": r, "i": i, "before": v0, "after": v1,
                         "margin": mpf(v1 - v0) if v1 > v0 else mpf(1 if v1 == v0 else -1),
                         "ok": v1 >= v0})
    return _finish("substitutions", 1, split_max, rows,
                   ("kind", "r", "i", "before", "after", "margin"), location_key="i",
                   notes="equality rows carry margin 1")


# -- trace formula against the exact series --------------------------------

def _trace_row(args):
    n, scale = args
    try:
        res = trace_S(n, PrecisionPolicy.for_n(n, scale=scale))
    except CertificationError as exc:
        return {"n": n, "error": str(exc)}
    return {"n": n, "alpha_trace": res.alpha_int, "residual": res.residual,
            "bits": res.policy.working_bits, "classes": len(res.per_class_terms)}


@lru_cache(maxsize=4)
def _trace_rows(n_max: int, scale: int, threads: int) -> tuple:
    return tuple(parallel_map(_trace_row, [(n, scale) for n in range(1, n_max + 1)], threads))


def verify_trace_formula(n_max: int, threads: int | None = None,
                         table: RankTable | None = None, residual_tol=mpf("1e-6")) -> BoundReport:
    table = table or rank_table(n_max)
    threads = default_threads() if threads is None else threads
    rows = []
    for row in _trace_rows(n_max, 1, threads):
        n = row["n"]
        ok = "error" not in row and row["alpha_trace"] == table.alpha[n] and row["residual"] < residual_tol
        margin = residual_tol - row["residual"] if "error" not in row else mpf(-1)
        rows.append({**row, "alpha_exact": table.alpha[n], "margin": margin, "ok": ok})
    return _finish("trace", 1, n_max, rows,
                   ("n", "alpha_exact", "alpha_trace", "residual", "bits", "classes", "margin"),
                   notes="margin is residual tolerance minus residual")


def verify_precision_doubling(n_max: int, threads: int | None = None,
                              shrink=mpf(2) ** 16) -> BoundReport:
    """Doubling the working precision keeps every rounded alpha(n) and
    shrinks the rounding residual by at least ``shrink``."""
    threads = default_threads() if threads is None else threads
    base = _trace_rows(n_max, 1, threads)
    double = _trace_rows(n_max, 2, threads)
    rows = []
    for b, d in zip(base, double):
        ok = ("error" not in b and "error" not in d and b["alpha_trace"] == d["alpha_trace"]
              and d["residual"] * shrink <= b["residual"])
        ratio = b["residual"] / d["residual"] if ok and d["residual"] else mpmath.inf
        rows.append({"n": b["n"], "alpha": b.get("alpha_trace"), "residual": b.get("residual"),
                     "residual_doubled": d.get("residual"),
                     "margin": mpmath.log(ratio, 2) - 16 if ok else mpf(-1), "ok": ok})
    return _finish("precision", 1, n_max, rows,
                   ("n", "alpha", "residual", "residual_doubled", "margin"),
                   notes="margin is log2(residual shrink) - 16")
