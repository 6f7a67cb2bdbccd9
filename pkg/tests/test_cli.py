import csv
import io
import json
from fractions import Fraction as Fr
from pathlib import Path

import pytest

from blowup_extremal import cli, extremal, regularity, stability
from blowup_extremal.exactmath import Poly
from blowup_extremal.regularity import EpsOutcome

GOLDEN = Path(__file__).parent / "golden"


def run(*argv, **kw):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), stdout=out, stderr=err, **kw)
    return code, out.getvalue(), err.getvalue()


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestSlope:
    def test_hand_row(self):
        code, out, _ = run("slope", "--n", "3", "--eps", "1/2")
        assert code == 0
        (row,) = csv_rows(out)
        assert row["mu"] == "15/2" and row["mu_seshadri"] == "12/5" and row["margin"] == "-51/10"
        assert row["eps_float"] == "0.5"

    def test_grid_margins_negative_and_open(self):
        code, out, _ = run("slope", "--n", "4", "--eps-grid", "12")
        assert code == 0
        rows = csv_rows(out)
        assert [r["eps"] for r in rows] == [str(Fr(j, 12)) for j in range(1, 12)]
        assert all(Fr(r["margin"]) < 0 for r in rows)
        assert "0" not in {r["eps"] for r in rows} and "1" not in {r["eps"] for r in rows}

    def test_json_rows(self):
        code, out, _ = run("slope", "--n", "3", "--eps", "1/3", "--format", "json")
        obj = json.loads(out)
        assert code == 0 and obj["schema"] == 1 and obj["rows"][0]["unstable"] is True

    @pytest.mark.parametrize("eps", ["0", "1", "0.5", "abc", "3/2"])
    def test_bad_eps_is_usage(self, eps):
        assert run("slope", "--n", "3", "--eps", eps)[0] == 2


class TestCertify:
    def test_range_valid(self):
        code, out, _ = run("instability-certify", "--n", "3..8")
        obj = json.loads(out)
        assert code == 0 and obj["all_valid"]
        assert [c["n"] for c in obj["certificates"]] == list(range(3, 9))
        first = obj["certificates"][0]
        assert first["margin_numerator"] == stability.margin_numerator_poly(3).to_strings()
        assert all("/" in c or c.lstrip("-").isdigit() for c in first["margin_numerator"])

    def test_tampered_exits_one(self):
        def tampered(n):
            bad = stability.margin_numerator_poly(n) - Poly([Fr(1, 10)])
            return stability.certificate_from_polynomial(n, bad)

        code, out, _ = run("instability-certify", "--n", "3", certifier=tampered)
        assert code == 1 and json.loads(out)["all_valid"] is False

    def test_csv_rejected(self):
        assert run("instability-certify", "--n", "3", "--format", "csv")[0] == 2


class TestExtremalAndVerify:
    def test_extremal_exact_strings(self):
        code, out, _ = run("extremal", "--n", "3", "--eps", "1/100")
        obj = json.loads(out)
        c = extremal.compute_constants(3, Fr(1, 100))
        assert code == 0 and obj["constants"]["delta"] == str(c.delta)
        assert obj["residue_at_eps"] == "1"

    def test_verify_pass(self):
        code, out, _ = run("verify", "--n", "3", "--eps", "1/100")
        assert code == 0 and json.loads(out)["overall"] is True

    def test_verify_golden(self, tmp_path):
        dest = tmp_path / "v.json"
        assert run("verify", "--n", "3", "--eps", "1/100", "--out", str(dest))[0] == 0
        assert dest.read_bytes() == (GOLDEN / "verify_n3_eps1_100.json").read_bytes()

    def test_verify_failure_exits_one(self, monkeypatch):
        real = extremal.build_Q
        monkeypatch.setattr(extremal, "build_Q", lambda n, e, c: real(n, e, c) + Poly([Fr(1, 10**6)]))
        code, out, _ = run("verify", "--n", "3", "--eps", "1/100")
        assert code == 1 and json.loads(out)["first_failure"] == "qAtOne"

    def test_construction_error_exits_three(self, monkeypatch):
        # the gamma denominator only vanishes at eps = 1, outside the domain; force it
        monkeypatch.setattr(extremal, "gamma_denominator", lambda n, e: 0 * e)
        code, out, _ = run("verify", "--n", "3", "--eps", "1/100")
        obj = json.loads(out)
        assert code == 3
        assert obj["error"] == "VanishingDenominator" and obj["which"] == "gamma" and obj["eps"] == "1/100"

    def test_float_eps_rejected(self):
        assert run("verify", "--n", "3", "--eps", "0.01")[0] == 2
        assert run("extremal", "--n", "3", "--eps", "0.01")[0] == 2

    def test_missing_flags(self):
        assert run("verify", "--n", "3")[0] == 2
        assert run("verify", "--eps", "1/100")[0] == 2
        assert run("bogus")[0] == 2
        assert run("verify", "--n", "2", "--eps", "1/100")[0] == 2


class TestEpsilon0:
    def test_synthetic_bracket(self, monkeypatch, tmp_path):
        thr = Fr(2, 7)

        def fake(n, e, grid=3):
            ok = e < thr
            return EpsOutcome(Fr(e), "pass" if ok else "fail", None if ok else "hessianPD", None)

        monkeypatch.setattr(regularity, "evaluate_eps", fake)
        dest = tmp_path / "z.json"
        code, _, _ = run("epsilon0", "--n", "3", "--resolution", "1/50", "--refine", "20",
                         "--jobs", "1", "--out", str(dest))
        obj = json.loads(dest.read_text())
        assert code == 0 and obj["verdict"] == "bracket"
        assert Fr(obj["first_fail"]) - Fr(obj["last_pass"]) <= Fr(1, 50) / 2**20
        assert obj["anomalies"] == []
        rows = csv_rows(dest.with_suffix(".csv").read_text())
        assert {r["first_failure"] for r in rows if r["status"] == "fail"} == {"hessianPD"}
        assert {r["phase"] for r in rows} == {"scan", "bisect"}

    def test_real_scan_csv(self):
        code, out, _ = run("epsilon0", "--n", "3", "--resolution", "1/10", "--refine", "0",
                           "--format", "csv", "--jobs", "2")
        rows = csv_rows(out)
        assert code == 0 and len(rows) == 9 and all(r["status"] == "pass" for r in rows)
        assert list(rows[0]) == list(cli.EPS_CSV_HEADER)

    def test_bad_resolution(self):
        assert run("epsilon0", "--n", "3", "--resolution", "1/5")[0] == 2
        assert run("epsilon0", "--n", "3", "--resolution", "1/20", "--refine", "-1")[0] == 2


class TestSample:
    def test_header_and_accuracy(self):
        code, out, err = run("sample", "--n", "3", "--eps", "1/100")
        assert code == 0 and err == ""
        lines = out.split("\n")
        assert lines[0] == "x1,x2,x3,rho,hpp,S_fd,S_target,min_eig,det_closed,det_numeric"
        rows = csv_rows(out)
        assert len(rows) == 125
        assert all(abs(float(r["S_fd"]) - float(r["S_target"])) <= 1e-4 for r in rows)
        assert all(float(r["min_eig"]) > 0 for r in rows)

    def test_float_eps_warns(self):
        code, out, err = run("sample", "--n", "3", "--eps", "0.01", "--grid", "2", "--format", "json")
        obj = json.loads(out)
        assert code == 0 and "warning" in err
        assert obj["eps"] == "1/100" and obj["warning"]

    def test_tight_tolerance_fails(self):
        assert run("sample", "--n", "3", "--eps", "1/100", "--grid", "2", "--tol", "1e-15")[0] == 1

    @pytest.mark.parametrize("flag,value", [("--step", "0"), ("--tol", "-1"), ("--margin", "0.7"), ("--grid", "1")])
    def test_bad_numeric_flags(self, flag, value):
        assert run("sample", "--n", "3", "--eps", "1/100", flag, value)[0] == 2


class TestOutputContract:
    @pytest.mark.parametrize("argv", [
        ("slope", "--n", "3"),
        ("sample", "--n", "3", "--eps", "1/50", "--grid", "3"),
        ("extremal", "--n", "4", "--eps", "1/7"),
        ("epsilon0", "--n", "3", "--resolution", "1/10", "--refine", "2"),
    ])
    def test_byte_identical_reruns(self, argv, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run(*argv, "--out", str(a))[0] == 0
        assert run(*argv, "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"\r\n" not in a.read_bytes()

    def test_json_schema_first(self):
        for argv in (("extremal", "--n", "3", "--eps", "1/3"), ("verify", "--n", "3", "--eps", "1/3")):
            obj = json.loads(run(*argv)[1])
            assert list(obj)[:2] == ["schema", "command"] and obj["schema"] == 1

    def test_float_format(self):
        assert cli.fmt_float(Fr(1, 3)) == "0.33333333333333331"
        assert len(cli.fmt_float(0.1).replace("0.", "")) <= 17

    def test_n_list_parsing(self):
        assert cli.parse_n_list("3..5") == [3, 4, 5]
        assert cli.parse_n_list("3,7") == [3, 7]
        assert run("instability-certify", "--n", "5..3")[0] == 2
