"""Acceptance criteria, one test each. Every test prints (and records for
the end-of-run summary) a single PASS/FAIL line before asserting."""

import json

import mpmath
from mpmath import mpf
import pytest

from conftest import ACCEPTANCE_LINES
from mocktheta import cli
from mocktheta import kloosterman as kl
from mocktheta import verifier as vf
from mocktheta.modular import trace_S
from mocktheta.series import (
    f_weakly_holomorphic_coeffs,
    mock_theta_coeffs,
    partition_counts,
    partitions,
    rank_histogram,
)


def record(k: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_01_exact_layer_oracles():
    alpha = mock_theta_coeffs(60)
    p = partition_counts(60)
    bad = []
    for n in range(1, 61):
        hist = rank_histogram(n)
        even = sum(c for r, c in hist.items() if r % 2 == 0)
        odd = sum(hist.values()) - even
        if alpha[n] != even - odd or p[n] != sum(hist.values()):
            bad.append(n)
    enum_small = all(sum(1 for _ in partitions(n)) == p[n] for n in range(31))
    record(1, not bad and enum_small,
           f"alpha(n) = N(0,2;n) - N(1,2;n) and p(n) by enumeration for n <= 60; mismatches {bad}")


def test_02_trace_formula(capsys):
    code = cli.run(["alpha", "--n-max", "200", "--method", "both", "--format", "json"])
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    disagree = [r["n"] for r in rows if not r["agree"] or mpf(r["residual"]) >= mpf("1e-6")]
    worst = max(mpf(r["residual"]) for r in rows)
    res24 = trace_S(24)
    eps5 = {t.sign for t in res24.per_class_terms if t.u == 5}
    ok = code == 0 and len(rows) == 200 and not disagree and eps5 == {-1} and res24.alpha_int == -53
    record(2, ok, f"trace = exact for 1 <= n <= 200 (max residual {mpmath.nstr(worst, 3)}); "
                  f"n=24 uses u=5 with eps=-1")


def test_03_f_coefficients():
    F = f_weakly_holomorphic_coeffs(2)
    got = [F[n] for n in range(-1, 3)]
    record(3, got == [1, -4, -83, -296], f"c_F(-1..2) = {got}")


def test_04_kloosterman_layer():
    b0 = kl.b0_series(10_000)
    closed = kl.b0_closed_forms()
    per_ell = all(abs(b0.per_ell[e] - closed[e]) < 0.01 for e in kl.DIVISORS_OF_6)
    ramanujan = all(abs(kl.kloosterman_sum(kl.KloostermanParams(-1, 0, c)) - m) < 1e-9
                    for c, m in zip(range(1, 51), kl.mobius_table(50)[1:]))
    a1, a2 = kl.a_coefficient_plateau(1), kl.a_coefficient_plateau(2)
    series_ok = all(s.total < 0 and abs(s.total / t - 1) < 0.1 for s, t in ((a1, -83), (a2, -296)))
    ok = abs(b0.total + 4) < 0.05 and per_ell and ramanujan and series_ok
    record(4, ok, f"b0(1e4) = {mpmath.nstr(b0.total, 8)}; per-l sums within 0.01; "
                  f"S(-1,0;c) = mu(c) for c <= 50; a(1) ~ {a1.total:.2f} (c<={a1.c_max}), "
                  f"a(2) ~ {a2.total:.2f} (c<={a2.c_max})")


def test_05_alpha_error_bound(table):
    rep = vf.verify_theorem_main(2000, table=table)
    record(5, rep.passed and rep.worst_margin > 0,
           f"|E(n)| < bound for 1..2000; worst margin {mpmath.nstr(rep.worst_margin, 4)} "
           f"at n={rep.worst_location}")


def test_06_partition_and_corollary_bounds(table):
    reps = [vf.verify_partition_error(2000, n_min=4, table=table),
            vf.verify_corollaries(2000, table=table),
            vf.verify_partition_lower(2000, table=table)]
    ok = all(r.passed and r.worst_margin > 0 for r in reps)
    record(6, ok, "; ".join(f"{r.claim_id} {r.range[0]}..{r.range[1]} "
                            f"{'pass' if r.passed else 'FAIL'}" for r in reps))


def test_07_sandwich(table):
    rep = vf.verify_sandwich(4600, table=table)
    r0 = all(row["ok"] for row in rep.rows if row["r"] == 0)
    r1 = all(row["ok"] for row in rep.rows if row["r"] == 1)
    r1_failures = [row["n"] for row in rep.rows if row["r"] == 1 and not row["ok"]]
    boundary = not vf.sandwich_condition(4542) and vf.sandwich_condition(4543)
    ok = r0 and r1 and rep.threshold == 4543 and boundary
    record(7, ok, f"r=0 on 8..4600: {'pass' if r0 else 'FAIL'}; r=1 on 7..4600: "
                  f"{'pass' if r1 else 'FAIL at n=' + str(r1_failures)}; analytic condition "
                  f"first holds at n={rep.threshold}")


def test_08_convexity_frontier():
    frontier = vf.table3()
    got = [(f.C_a_truncated, f.max_b) for f in frontier]
    expected = [("2.20", 24), ("1.86", 22), ("1.62", 21), ("1.43", 20), ("1.27", 19),
                ("1.15", 18), ("1.05", 17)]
    record(8, got == expected, f"(C_a, max b) = {got}")


def test_09_convexity(table):
    exact = vf.convexity_exact(2000, table)
    final = vf.verify_final_inequality(5000, grid_max=10**6)
    ints_ok = all(row["ok"] for row in final.rows if not row["sampled"])
    ok = exact.passed and exact.worst_margin > 0 and final.passed and ints_ok
    record(9, ok, f"exact pairs with a+b <= 2000 ({'pass' if exact.passed else 'FAIL'}, "
                  f"worst log-margin {mpmath.nstr(exact.worst_margin, 4)}); final inequality "
                  f"18..5000 {'pass' if ints_ok else 'FAIL'}, {final.notes}")


def test_10_maximal_products(table):
    t4 = vf.verify_table4(table)
    closed = vf.verify_maxn(1000, table=table)
    ok = t4.passed and closed.passed
    record(10, ok, f"Table 4 rows 1..23 {'pass' if t4.passed else 'FAIL'}; closed forms to "
                   f"n=1000 (r=0 unique from n=5, r=1 closure sets to n=40) "
                   f"{'pass' if closed.passed else 'FAIL'}")


def test_11_coefficient_bound():
    rep = kl.coefficient_bound_check(500)
    record(11, rep.passed and rep.worst_margin > 0, f"|c_F(n)| <= C e^(4 pi sqrt n) for n <= 500, "
                                                    f"C = {mpmath.nstr(kl.lemma_constant(), 8)}; {rep.notes}")


def test_12_precision_robustness():
    rep = vf.verify_precision_doubling(100)
    record(12, rep.passed and rep.worst_margin > 0,
           f"doubling precision keeps alpha(n), n <= 100; smallest shrink exponent "
           f"{mpmath.nstr(rep.worst_margin + 16, 5)} bits at n={rep.worst_location}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
