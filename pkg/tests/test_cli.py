import csv
import io
import json

import pytest

from mocktheta import cli
from mocktheta.modular import CertificationError


def run(argv, capsys):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestComputation:
    def test_alpha_both_json(self, capsys):
        code, out, _ = run(["alpha", "--n", "24", "--method", "both", "--format", "json"], capsys)
        assert code == 0
        row = json.loads(out)
        assert row["alpha"] == row["alpha_trace"] == "-53"
        assert float(row["residual"]) < 1e-6

    def test_alpha_exact_csv(self, capsys):
        code, out, _ = run(["alpha", "--n-max", "5"], capsys)
        assert code == 0
        assert out == "n,alpha\n1,1\n2,-2\n3,3\n4,-3\n5,3\n"

    def test_big_integers_are_strings(self, capsys):
        code, out, _ = run(["pn", "--n", "1000", "--format", "json"], capsys)
        p = json.loads(out)["p"]
        assert isinstance(p, str) and p.startswith("24061467864032622473692149727991")

    def test_rank_filter(self, capsys):
        code, out, _ = run(["rank", "--n", "9", "--r", "0"], capsys)
        assert out == "n,N0\n9,18\n"

    def test_fcoeffs(self, capsys):
        _, out, _ = run(["fcoeffs", "--n-max", "2"], capsys)
        assert out.splitlines()[1:] == ["-1,1", "0,-4", "1,-83", "2,-296"]

    def test_b0(self, capsys):
        _, out, _ = run(["b0", "--c-max", "2000"], capsys)
        row = next(csv.DictReader(io.StringIO(out)))
        assert abs(float(row["b0"]) + 4) < 0.05

    def test_acoeff_series(self, capsys):
        _, out, _ = run(["acoeff-series", "--n", "2", "--format", "json"], capsys)
        row = json.loads(out)
        assert row["plateau"] is True and abs(float(row["value"]) + 296) < 30

    def test_trace_detail(self, capsys):
        code, out, _ = run(["trace-detail", "--n", "24"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 21 + 1
        assert rows[-1]["form"] == "alpha=-53"

    def test_tables(self, capsys):
        _, out, _ = run(["tables", "maxn", "--r", "1", "--n-max", "23"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [int(r["maxN1"]) for r in rows][-3:] == [768, 2048, 1536]
        _, out, _ = run(["tables", "table3"], capsys)
        assert [r["max_b"] for r in csv.DictReader(io.StringIO(out))] == \
            ["24", "22", "21", "20", "19", "18", "17"]
        _, out, _ = run(["tables", "table2", "--n", "1"], capsys)
        assert out.splitlines()[1:] == ["1,1,6", "2,-1,3", "2,1,3"]

    def test_frontier(self, capsys):
        _, out, _ = run(["frontier", "--a", "17"], capsys)
        assert out.splitlines()[1].endswith(",1.05,17")


class TestVerify:
    def test_convexity_passes(self, capsys):
        code, out, err = run(["verify", "convexity", "--max-sum", "1000"], capsys)
        assert code == 0
        assert out.startswith("r,a,b,margin\n")
        assert json.loads(err)["pass"] is True

    def test_theorem_columns(self, capsys):
        code, out, _ = run(["verify", "theorem", "--n-max", "20"], capsys)
        assert code == 0 and out.startswith("n,alpha,main,E,bound,margin\n")

    def test_failure_exit_code(self, capsys):
        # the sandwich lower bound fails for r = 1 at n = 7
        code, _, err = run(["verify", "sandwich", "--n-max", "20"], capsys)
        assert code == 1 and json.loads(err)["pass"] is False

    def test_lemma32(self, capsys):
        code, _, err = run(["verify", "lemma32", "--n-max", "50"], capsys)
        assert code == 0 and json.loads(err)["claim_id"] == "lemma32"


class TestExitCodes:
    def test_help(self, capsys):
        assert run(["verify", "maxn", "--help"], capsys)[0] == 0

    @pytest.mark.parametrize("argv", [
        ["alpha", "--n", "3", "--bogus"],
        ["alpha", "--n", "3", "--precision", "32"],
        ["alpha", "--n", "0"],
        ["alpha"],
        ["verify"],
        ["frontier", "--a", "10"],
        ["alpha", "--n-min", "5", "--n-max", "3"],
    ])
    def test_usage_errors(self, argv, capsys):
        assert run(argv, capsys)[0] == 2

    def test_precision_below_policy(self, capsys):
        assert run(["alpha", "--n", "200", "--method", "trace", "--precision", "64"], capsys)[0] == 2

    def test_certification_failure(self, capsys, monkeypatch):
        def boom(n, policy):
            raise CertificationError("residual too large")
        monkeypatch.setattr(cli, "trace_S", boom)
        code, _, err = run(["alpha", "--n", "3", "--method", "trace"], capsys)
        assert code == 3 and "certification" in err


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ["verify", "theorem", "--n-max", "60"],
        ["alpha", "--n-max", "12", "--method", "both", "--format", "json"],
        ["tables", "table4"],
    ])
    def test_byte_identical(self, argv, tmp_path, capsys):
        outputs = []
        for k, threads in enumerate(("1", "2")):
            path = tmp_path / f"out{k}"
            assert cli.run(argv + ["--output", str(path), "--threads", threads]) == 0
            outputs.append(path.read_bytes())
        capsys.readouterr()
        assert outputs[0] == outputs[1] and outputs[0]
