import csv
import io
import json
import math
import subprocess
import sys

import pytest

from qcorr import acceptance, cli, correlations


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    assert code == 0, text
    return json.loads(text)


def run_csv(*argv):
    code, text = run(*argv)
    assert code == 0
    return list(csv.DictReader(io.StringIO(text)))


class TestAnalyze:
    def test_werner(self):
        rep = run_json("analyze", "--state", "werner", "--p", "0.8")
        assert rep["d_g"] == pytest.approx(0.4266667, abs=1e-7)
        assert rep["m"] == pytest.approx(1.28) and rep["fidelity"] == pytest.approx(0.9)
        assert rep["regime"] == "BellViolatingUseful"
        assert rep["audit"]["eq11_applicable"] and rep["audit"]["eq11_holds"]

    def test_rho1(self):
        rep = run_json("analyze", "--state", "rho1")
        assert rep["d_g"] == 0 and rep["d_g_max"] == pytest.approx(0.3333333, abs=1e-7)

    def test_maximally_mixed_file(self, fixtures):
        rep = run_json("analyze", "--input", str(fixtures / "maximally_mixed.json"))
        assert all(rep[k] == 0 for k in ("d_g", "d_g_min", "d_g_max", "m", "u", "negativity"))
        assert rep["fidelity"] == 0.5

    def test_csv_schema(self):
        rows = run_csv("--format", "csv", "analyze", "--state", "singlet")
        assert tuple(rows[0]) == cli.sweep.CSV_COLUMNS and rows[0]["param_or_time"] == ""

    def test_high_dim(self):
        rep = run_json("analyze", "--state", "isotropic", "--d", "3", "--f", "0.7")
        assert rep["negativity"] == pytest.approx(0.55) and rep["lower_bound_witness"] == pytest.approx(0.3025)
        rep = run_json("analyze", "--input", "tests/fixtures/isotropic_3_0.7.json")
        assert rep["detected"] and rep["negativity_numeric"] == pytest.approx(0.55)

    def test_nine_significant_digits(self):
        _, text = run("analyze", "--state", "werner", "--p", "0.8")
        assert '"d_g": 0.426666667,' in text


class TestExitCodes:
    def test_invariant_violation(self, fixtures, capsys):
        code, _ = run("analyze", "--input", str(fixtures / "trace_0.9.json"))
        assert code == 2 and "trace" in capsys.readouterr().err

    def test_parse_error(self, fixtures):
        assert run("analyze", "--input", str(fixtures / "malformed.json"))[0] == 3
        assert run("analyze", "--input", "no/such/file.json")[0] == 3

    @pytest.mark.parametrize(
        "argv",
        [
            ("analyze",),
            ("analyze", "--state", "werner"),
            ("analyze", "--state", "werner", "--p", "2"),
            ("sweep", "--state", "werner", "--from", "1", "--to", "0"),
            ("sweep", "--state", "werner", "--steps", "1"),
            ("trajectory", "--p0", "0.9", "--gamma", "1", "--tmax", "-1"),
            ("witness-plan", "--family", "wf", "--d", "9"),
            ("bogus",),
        ],
    )
    def test_bad_arguments(self, argv):
        assert run(*argv)[0] == 2

    def test_oracle_discrepancy(self, fixtures):
        # an impossible tolerance forces the discrepancy path
        code, _ = run("oracle", "--input", str(fixtures / "werner_0.5.json"), "--restarts", "2", "--gap-tol", "-1")
        assert code == 4


class TestSweep:
    def test_werner_annotations(self):
        rows = run_csv("sweep", "--state", "werner", "--param", "p", "--from", "0", "--to", "1", "--steps", "101")
        assert tuple(rows[0]) == cli.sweep.CSV_COLUMNS
        ann = {r["regime"]: float(r["param_or_time"]) for r in rows if r["regime"].startswith("threshold:")}
        assert ann["threshold:bell"] == pytest.approx(0.7071068, abs=1e-6)
        assert ann["threshold:eq9_window"] == pytest.approx(0.7182, abs=1e-4)

    def test_isotropic_detection(self):
        rows = run_csv("sweep", "--state", "isotropic", "--d", "3", "--steps", "31")
        det = [r for r in rows if r["detected"] == "threshold:detection"]
        assert float(det[0]["f"]) == pytest.approx(1 / 3, abs=1e-8)

    def test_json_format(self):
        rep = run_json("--format", "json", "sweep", "--state", "werner-d", "--d", "3", "--steps", "5")
        assert rep["thresholds"]["detection"] == pytest.approx(0.5)


class TestOracle:
    def test_werner_fixture(self, fixtures):
        rep = run_json("oracle", "--input", str(fixtures / "werner_0.5.json"), "--restarts", "64", "--seed", "0")
        assert rep["gap"] <= 1e-4

    def test_mixed(self):
        rep = run_json("oracle", "--state", "mixed", "--restarts", "8")
        assert rep["closed_form"] == 0 and rep["oracle"] == pytest.approx(0, abs=1e-12)

    def test_random_fixture_converged(self, fixtures):
        rep = run_json("oracle", "--input", str(fixtures / "random_seed7.json"), "--seed", "7")
        assert rep["converged"] is True

    def test_seed_env_fallback(self, monkeypatch):
        monkeypatch.setenv("QCORR_SEED", "5")
        rep = run_json("oracle", "--state", "singlet", "--restarts", "2")
        assert rep["seed"] == 5


class TestTrajectory:
    def test_crossings(self):
        rows = run_csv("trajectory", "--p0", "0.95", "--gamma", "5", "--tmax", "1", "--steps", "1000")
        ann = {r["regime"]: float(r["param_or_time"]) for r in rows if r["regime"].startswith("crossing:")}
        assert ann["crossing:bell"] == pytest.approx(math.log(0.95 * math.sqrt(2)) / 5, abs=1e-5)
        assert ann["crossing:useful"] == pytest.approx(math.log(2.85) / 5, abs=1e-5)
        seq = []
        for r in rows[:1000]:
            if not seq or seq[-1] != r["regime"]:
                seq.append(r["regime"])
        assert seq == ["BellViolatingUseful", "BellSatisfiedUseful", "NotUseful"]
        assert all("FAIL" not in (r["eq9"], r["eq10"], r["eq11"]) for r in rows)


class TestWitnessPlan:
    def test_wf(self):
        rep = run_json("witness-plan", "--family", "wf", "--d", "2")
        assert rep["nonzero_terms"] == 4 and rep["residual"] <= 1e-12

    def test_wx(self):
        rep = run_json("witness-plan", "--family", "wx", "--d", "2")
        assert {(t["a"], t["b"]): t["coefficient"] for t in rep["terms"]} == {
            ("I", "I"): 0.25, ("sx", "sx"): 0.25, ("sy", "sy"): 0.25, ("sz", "sz"): 0.25,
        }

    def test_wx_three(self):
        rep = run_json("witness-plan", "--family", "wx", "--d", "3")
        assert rep["basis"] == "gell-mann" and rep["residual"] <= 1e-12

    def test_csv(self):
        rows = run_csv("witness-plan", "--family", "wf", "--d", "2", "--format", "csv")
        assert [r["a"] + r["b"] for r in rows] == ["II", "sxsx", "sysy", "szsz"]


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("oracle", "--state", "werner", "--p", "0.3", "--restarts", "4", "--seed", "9"),
            ("sweep", "--state", "werner", "--steps", "11"),
            ("trajectory", "--p0", "0.9", "--gamma", "2", "--tmax", "1", "--steps", "20"),
        ],
    )
    def test_byte_identical(self, argv):
        assert run(*argv) == run(*argv)

    def test_subprocess(self):
        cmd = [sys.executable, "-m", "qcorr", "analyze", "--state", "werner", "--p", "0.6"]
        a = subprocess.run(cmd, capture_output=True, check=True).stdout
        b = subprocess.run(cmd, capture_output=True, check=True).stdout
        assert a == b and json.loads(a)["regime"] == "BellSatisfiedUseful"


def test_threshold_mutation_is_caught(monkeypatch):
    assert acceptance.run_criterion(10).passed
    monkeypatch.setattr(correlations, "BELL_DISCORD_THRESHOLD", 0.34)
    assert not acceptance.run_criterion(10).passed


@pytest.mark.parametrize("passed, expected", [(True, 0), (False, 1)])
def test_selftest_exit_code(monkeypatch, passed, expected):
    fake = [acceptance.CriterionResult(1, "stub", passed, "stub detail", 0.0)]

    def run_all(report=None):
        for r in fake:
            report(r)
        return fake

    monkeypatch.setattr(acceptance, "run_all", run_all)
    code, text = run("selftest")
    assert code == expected and text.splitlines()[-1] == f"{int(passed)}/1 criteria passed"
