"""Command-line front end.

Every subcommand writes one table of records (CSV or JSON lines) to stdout
or ``--output``. Verification subcommands also print a one-line JSON
summary on stderr.

Exit codes: 0 success, 1 a verification failed, 2 usage error,
3 a trace could not be certified.
"""

from __future__ import annotations

import argparse
import json
import sys

import mpmath

from . import kloosterman as kl
from . import verifier as vf
from .modular import CertificationError, PrecisionPolicy, trace_S
from .quadforms import table2_forms
from .report import BoundReport, fmt, write_csv, write_jsonl
from .series import f_weakly_holomorphic_coeffs, rank_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CERT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _precision(value: str) -> int:
    bits = int(value)
    if bits < 64:
        raise argparse.ArgumentTypeError("precision must be at least 64 bits")
    return bits


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="csv, or json (one object per line)")
    p.add_argument("--output", metavar="PATH", help="write records here instead of stdout")
    p.add_argument("--threads", type=_positive, default=None,
                   help=f"worker processes for sweeps (default ${vf.THREADS_ENV} or 1)")
    p.add_argument("--precision", type=_precision, default=None, metavar="BITS",
                   help="override the working precision (>= 64 bits)")


def _range(p: argparse.ArgumentParser, default_max: int | None = None) -> None:
    p.add_argument("--n", type=_positive, help="a single index")
    p.add_argument("--n-min", type=_positive, default=1)
    p.add_argument("--n-max", type=_positive, default=default_max)


def _resolve_range(args) -> range:
    if args.n is not None:
        return range(args.n, args.n + 1)
    if args.n_max is None:
        raise UsageError("give --n or --n-max")
    if args.n_max < args.n_min:
        raise UsageError("empty range")
    return range(args.n_min, args.n_max + 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mocktheta", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alpha", help="coefficients alpha(n) of f(q)")
    _range(p)
    p.add_argument("--method", choices=("exact", "trace", "both"), default="exact")
    _common(p)

    p = sub.add_parser("rank", help="N(0,2;n), N(1,2;n)")
    _range(p)
    p.add_argument("--r", type=int, choices=(0, 1), help="only this residue")
    _common(p)

    p = sub.add_parser("pn", help="partition numbers p(n)")
    _range(p)
    _common(p)

    p = sub.add_parser("fcoeffs", help="Fourier coefficients c_F(n), n >= -1")
    p.add_argument("--n-max", type=_positive, required=True)
    _common(p)

    p = sub.add_parser("acoeff-series", help="Kloosterman-Bessel series for a(n)")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--c-max", type=_positive, help="fixed truncation (default: until plateau)")
    _common(p)

    p = sub.add_parser("b0", help="Kloosterman series for the constant term")
    p.add_argument("--c-max", type=_positive, default=10_000)
    _common(p)

    p = sub.add_parser("trace-detail", help="per-class terms of the Heegner trace")
    p.add_argument("--n", type=_positive, required=True)
    _common(p)

    p = sub.add_parser("verify", help="check a bound over a finite range")
    vsub = p.add_subparsers(dest="claim", required=True)
    for claim, default in (("theorem", 2000), ("partition", 2000), ("corollaries", 2000),
                           ("sandwich", 4600), ("maxn", 1000), ("lemma32", 500),
                           ("trace", 200), ("precision", 100)):
        q = vsub.add_parser(claim)
        q.add_argument("--n-max", type=_positive, default=default)
        _common(q)
    q = vsub.add_parser("convexity")
    q.add_argument("--max-sum", type=_positive, default=2000)
    _common(q)
    q = vsub.add_parser("final-ineq")
    q.add_argument("--a-max", type=_positive, default=5000)
    q.add_argument("--grid-max", type=_positive, default=10**6)
    _common(q)
    q = vsub.add_parser("substitutions")
    q.add_argument("--split-max", type=_positive, default=500)
    _common(q)

    p = sub.add_parser("tables", help="reproduce the tabulated data")
    tsub = p.add_subparsers(dest="table", required=True)
    q = tsub.add_parser("table2", help="reduced forms with small a for D_n")
    q.add_argument("--n", type=_positive, required=True)
    _common(q)
    q = tsub.add_parser("table3", help="convexity frontier C_a")
    _common(q)
    for name in ("table4", "maxn"):
        q = tsub.add_parser(name, help="maxN(r,2;n) and its maximizers")
        q.add_argument("--r", type=int, choices=(0, 1))
        q.add_argument("--n-max", type=_positive, default=23)
        _common(q)

    p = sub.add_parser("frontier", help="C_a and max b for 11 <= a <= 17")
    p.add_argument("--a", type=int, choices=range(11, 18), metavar="{11..17}")
    _common(p)
    return parser


# -- subcommand bodies: each returns (rows, columns, report-or-None) --------

def _alpha(args):
    ns = _resolve_range(args)
    table = rank_table(ns[-1])
    rows = []
    failed = False
    traced = {}
    if args.method != "exact":
        policies = [PrecisionPolicy.for_n(n, bits=args.precision) for n in ns]
        results = vf.parallel_map(_trace_one, policies, args.threads)
        traced = dict(zip(ns, results))
    for n in ns:
        row = {"n": n}
        if args.method in ("exact", "both"):
            row["alpha"] = table.alpha[n]
        if args.method in ("trace", "both"):
            res = traced[n]
            row["alpha_trace"], row["residual"], row["bits"] = res
            if args.method == "both":
                row["agree"] = res[0] == table.alpha[n]
                failed |= not row["agree"]
        rows.append(row)
    cols = ["n"] + {"exact": ["alpha"], "trace": ["alpha_trace", "residual", "bits"],
                    "both": ["alpha", "alpha_trace", "residual", "bits", "agree"]}[args.method]
    return rows, cols, failed


def _trace_one(policy):
    res = trace_S(policy.n, policy)
    return res.alpha_int, res.residual, policy.working_bits


def _rank(args):
    ns = _resolve_range(args)
    t = rank_table(ns[-1])
    rows = [{"n": n, "p": t.p[n], "N0": t.N0[n], "N1": t.N1[n]} for n in ns]
    cols = ["n", "p", "N0", "N1"]
    if args.r is not None:
        cols = ["n", f"N{args.r}"]
    return rows, cols, False


def _pn(args):
    ns = _resolve_range(args)
    t = rank_table(ns[-1])
    return [{"n": n, "p": t.p[n]} for n in ns], ["n", "p"], False


def _fcoeffs(args):
    F = f_weakly_holomorphic_coeffs(args.n_max)
    return [{"n": n, "c_F": F[n]} for n in range(-1, args.n_max + 1)], ["n", "c_F"], False


def _acoeff(args):
    prec = args.precision or 53
    if args.c_max is not None:
        state = kl.a_coefficient_series(args.n, args.c_max, prec)
        plateaued = kl.plateau(state)
    else:
        state = kl.a_coefficient_plateau(args.n)
        plateaued = True
    row = {"n": args.n, "c_max": state.c_max, "value": mpmath.mpf(state.total),
           "plateau": plateaued}
    for ell in kl.DIVISORS_OF_6:
        row[f"partial_l{ell}"] = mpmath.mpf(state.partial[ell])
    cols = ["n", "c_max", "value", "plateau"] + [f"partial_l{e}" for e in kl.DIVISORS_OF_6]
    return [row], cols, False


def _b0(args):
    prec = args.precision or 64
    res = kl.b0_series(args.c_max, prec)
    closed = kl.b0_closed_forms(prec)
    row = {"c_max": res.c_max, "b0": res.total, "tail_bound": res.tail_bound}
    for ell in kl.DIVISORS_OF_6:
        row[f"sum_l{ell}"] = res.per_ell[ell]
        row[f"limit_l{ell}"] = closed[ell]
    cols = ["c_max", "b0", "tail_bound"] + [f"{k}_l{e}" for e in kl.DIVISORS_OF_6
                                            for k in ("sum", "limit")]
    return [row], cols, False


def _trace_detail(args):
    policy = PrecisionPolicy.for_n(args.n, bits=args.precision)
    res = trace_S(args.n, policy)
    rows = [{"u": t.u, "sign": t.sign, "form": str(t.form), "cusp": t.assignment.cusp_class,
             "shift": t.assignment.shift, "width": t.assignment.width,
             "zeta_exponent": t.assignment.zeta_exponent,
             "level6_form": str(t.assignment.level6_form), "value": t.value}
            for t in res.per_class_terms]
    rows.append({"u": "total", "value": res.S, "form": f"alpha={res.alpha_int}",
                 "cusp": f"residual={fmt(res.residual)}"})
    cols = ["u", "sign", "form", "cusp", "shift", "width", "zeta_exponent", "level6_form", "value"]
    return rows, cols, False


def _verify(args) -> BoundReport | tuple:
    c = args.claim
    if c == "theorem":
        return vf.verify_theorem_main(args.n_max)
    if c == "partition":
        rep = vf.verify_partition_error(args.n_max)
        lower = vf.verify_partition_lower(args.n_max) if args.n_max >= 4 else None
        if lower is not None:
            rep.passed = rep.passed and lower.passed
            rep.notes = (f"lower bound for 4..{args.n_max}: "
                         f"{'pass' if lower.passed else 'FAIL'}, worst relative margin "
                         f"{fmt(lower.worst_margin)} at n={lower.worst_location}")
        return rep
    if c == "corollaries":
        if args.n_max < 4:
            raise UsageError("corollaries start at n = 4")
        return vf.verify_corollaries(args.n_max)
    if c == "sandwich":
        return vf.verify_sandwich(args.n_max)
    if c == "convexity":
        return vf.convexity_exact(args.max_sum)
    if c == "final-ineq":
        if args.a_max < 18:
            raise UsageError("--a-max must be at least 18")
        return vf.verify_final_inequality(args.a_max, grid_max=args.grid_max)
    if c == "maxn":
        return vf.verify_maxn(args.n_max)
    if c == "substitutions":
        if args.split_max < 24:
            raise UsageError("--split-max must be at least 24")
        return vf.substitution_audit(split_max=args.split_max)
    if c == "lemma32":
        return kl.coefficient_bound_check(args.n_max, precision=max(args.precision or 128, 64))
    if c == "trace":
        return vf.verify_trace_formula(args.n_max, args.threads)
    if c == "precision":
        return vf.verify_precision_doubling(args.n_max, args.threads)
    raise UsageError(f"unknown claim {c}")


def _tables(args):
    if args.table == "table2":
        rows = [{"a": Q.a, "b": Q.b, "c": Q.c} for Q in table2_forms(args.n)]
        return rows, ["a", "b", "c"], False
    if args.table == "table3":
        return _frontier_rows(range(11, 18))
    rows = vf.table4_rows(args.n_max)
    cols = ["n", "maxN0", "maximizers0", "maxN1", "maximizers1"]
    if args.r is not None:
        cols = ["n", f"maxN{args.r}", f"maximizers{args.r}"]
    return rows, cols, False


def _frontier_rows(a_values):
    rows = [{"a": fr.a, "C_a": fr.C_a, "C_a_truncated": fr.C_a_truncated, "max_b": fr.max_b}
            for fr in (vf.find_Ca(a) for a in a_values)]
    return rows, ["a", "C_a", "C_a_truncated", "max_b"], False


def _frontier(args):
    return _frontier_rows([args.a] if args.a else range(11, 18))


HANDLERS = {"alpha": _alpha, "rank": _rank, "pn": _pn, "fcoeffs": _fcoeffs,
            "acoeff-series": _acoeff, "b0": _b0, "trace-detail": _trace_detail,
            "tables": _tables, "frontier": _frontier}


def _emit(args, rows, cols) -> None:
    if args.format == "csv":
        text = write_csv(rows, cols)
    else:
        text = write_jsonl({k: r.get(k) for k in cols} for r in rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.threads is None:
        args.threads = vf.default_threads()
    try:
        if args.command == "verify":
            report = _verify(args)
            _emit(args, report.rows, report.columns)
            print(json.dumps(report.summary()), file=sys.stderr)
            return EXIT_OK if report.passed else EXIT_FAIL
        rows, cols, failed = HANDLERS[args.command](args)
        _emit(args, rows, cols)
        return EXIT_FAIL if failed else EXIT_OK
    except CertificationError as exc:
        print(f"mocktheta: certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    except (UsageError, ValueError) as exc:
        print(f"mocktheta: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
