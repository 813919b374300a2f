import json

import numpy as np
import pytest

from mkbell.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExpand:
    def test_two_party_json(self, capsys):
        code, out, _ = run(capsys, "expand", "--n", "2")
        assert code == 0
        payload = json.loads(out)
        assert payload == [
            {"coefficient": 1, "labels": "AA"},
            {"coefficient": 1, "labels": "AB"},
            {"coefficient": 1, "labels": "BA"},
            {"coefficient": -1, "labels": "BB"},
        ]

    def test_three_party_csv(self, capsys):
        code, out, _ = run(capsys, "expand", "--n", "3", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "coefficient,labels"
        assert lines[1:] == ["2,AAB", "2,ABA", "2,BAA", "-2,BBB"]


class TestClassicalMax:
    def test_two_party_half(self, capsys):
        code, out, _ = run(capsys, "classical-max", "--n", "2", "--spin", "1/2")
        assert code == 0
        payload = json.loads(out)
        assert payload["bound"] == "1/2"
        assert payload["achieved"] is True
        assert payload["strategies_checked"] == 16
        assert len(payload["argmax_a"]) == 2

    def test_full_grid(self, capsys):
        code, out, _ = run(capsys, "classical-max", "--n", "2", "--spin", "1",
                           "--full-grid")
        assert code == 0
        payload = json.loads(out)
        assert payload["bound"] == "2"
        assert payload["strategies_checked"] == 81

    def test_budget_exit_code(self, capsys):
        code, _, err = run(capsys, "classical-max", "--n", "6", "--spin", "2",
                           "--full-grid")
        assert code == 3
        assert "error" in err


class TestQuantumMax:
    def test_two_party_half(self, capsys):
        code, out, _ = run(capsys, "quantum-max", "--n", "2", "--spin", "1/2")
        assert code == 0
        payload = json.loads(out)
        assert payload["top_eigenvalue"] == pytest.approx(np.sqrt(2) / 2, rel=1e-8)
        assert payload["predicted"] == pytest.approx(np.sqrt(2) / 2, rel=1e-12)
        assert payload["relative_error"] < 1e-8
        assert payload["gap"] == pytest.approx(np.sqrt(2) / 2, rel=1e-6)

    def test_dim_cap_exit_code(self, capsys):
        code, _, err = run(capsys, "quantum-max", "--n", "3", "--spin", "1",
                           "--dim-cap", "8")
        assert code == 3
        assert "error" in err


class TestRatio:
    def test_three_party_spin_one(self, capsys):
        code, out, _ = run(capsys, "ratio", "--n", "3", "--spin", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["ratio"] == pytest.approx(2.0, rel=1e-8)
        assert payload["predicted"] == 2.0


class TestSample:
    def test_reproducible_violation(self, capsys):
        args = ("sample", "--n", "2", "--spin", "1/2",
                "--shots", "40000", "--seed", "7")
        code, out1, _ = run(capsys, *args)
        assert code == 0
        code, out2, _ = run(capsys, *args)
        assert code == 0
        assert out1 == out2
        payload = json.loads(out1)
        assert payload["shots_per_setting"] == 10000
        assert payload["classical_bound"] == "1/2"
        assert len(payload["per_term"]) == 4
        assert payload["bell_estimate"] == pytest.approx(
            np.sqrt(2) / 2, abs=8 * payload["bell_stderr"]
        )
        assert payload["sigmas_above_classical"] > 5


class TestReport:
    def test_grid_json(self, capsys):
        code, out, _ = run(capsys, "report", "--grid", "n=2..3", "s=1/2..1")
        assert code == 0
        payload = json.loads(out)
        rows = payload["rows"]
        assert len(rows) == 4
        by_key = {(row["n"], row["s"]): row for row in rows}
        assert by_key[(3, "1")]["classical"] == "4"
        assert by_key[(3, "1")]["quantum"] == pytest.approx(8.0, rel=1e-8)
        assert by_key[(3, "1")]["ratio"] == pytest.approx(2.0, rel=1e-8)

    def test_single_scenario_csv_to_file(self, capsys, tmp_path):
        target = tmp_path / "report.csv"
        code, out, _ = run(capsys, "report", "--n", "2", "--spin", "1/2",
                           "--format", "csv", "--output", str(target))
        assert code == 0
        assert out == ""
        lines = target.read_text().strip().splitlines()
        assert lines[0].startswith("n,s,classical,quantum,ratio")
        assert lines[1].startswith("2,1/2,1/2,")

    def test_bad_grid_exit_code(self, capsys):
        code, _, err = run(capsys, "report", "--grid", "n=2..3", "s=oops")
        assert code == 2
        assert "error" in err

    def test_missing_scenario_is_usage_error(self, capsys):
        with pytest.raises(SystemExit):
            main(["report"])


class TestArgs:
    def test_bad_spin_is_usage_error(self, capsys):
        with pytest.raises(SystemExit):
            main(["classical-max", "--n", "2", "--spin", "1/3"])
