import csv
import json

import pytest

from costblotto.cli import (
    SWEEP_CSV_HEADER,
    _fmt,
    classify_hypothesis_case,
    main,
)

S_STAR = {(0, 0), (0, 1), (1, 0), (1, 1)}

EXAMPLE_CONFIG = {
    "n": 2,
    "budget_A": 2,
    "budget_B": 2,
    "valuations": {"kind": "sign", "weight": 1},
    "assign_costs_A": {"kind": "none"},
    "assign_costs_B": {"kind": "none"},
    "obtain_cost_A": {"kind": "linear", "coeff": 1},
    "obtain_cost_B": {"kind": "linear", "coeff": 1},
}

SMALL_SWEEP = {
    "n": {"min": 2, "max": 2},
    "budget_A": {"min": 2, "max": 2},
    "budget_B": {"min": 2, "max": 2},
    "c0_inv": {"min": 1, "max": 1, "interval": 1},
}


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "game.json"
    path.write_text(json.dumps(EXAMPLE_CONFIG))
    return str(path)


def _write_spec(tmp_path, spec, name="sweep.json"):
    path = tmp_path / name
    path.write_text(json.dumps(spec))
    return str(path)


class TestFmt:
    def test_negative_zero_folded(self):
        assert _fmt(-0.0) == "0"

    def test_plain(self):
        assert _fmt(0.25) == "0.25"
        assert _fmt(36) == "36"


class TestSolve:
    def test_writes_solution(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["solve", "--config", config_path,
                     "--player", "A", "--out", str(out)]) == 0
        payload = json.loads((out / "solution_A.json").read_text())
        assert payload["player"] == "A"
        assert abs(payload["value"]) <= 1e-8
        cert = payload["certificate"]
        assert cert["is_equilibrium"] is True
        assert cert["gap_A"] <= 1e-7 and cert["gap_B"] <= 1e-7
        support = payload["strategy"]["support"]
        assert abs(sum(e["probability"] for e in support) - 1) <= 1e-9
        assert all(tuple(e["assignment"]) in S_STAR for e in support)
        assert len(payload["marginals"]) == 2
        for row in payload["marginals"]:
            assert len(row) == 3
            assert abs(sum(row) - 1) <= 1e-9
        obtained = payload["resources_obtained"]
        assert len(obtained) == 3
        assert abs(sum(obtained) - 1) <= 1e-9

    def test_player_b(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["solve", "--config", config_path,
                     "--player", "B", "--out", str(out)]) == 0
        payload = json.loads((out / "solution_B.json").read_text())
        assert payload["player"] == "B"
        assert all(tuple(e["assignment"]) in S_STAR
                   for e in payload["strategy"]["support"])


class TestBounds:
    def test_resources(self, config_path, tmp_path):
        out = tmp_path / "out"
        assert main(["bounds", "--config", config_path,
                     "--statistic", "resources", "--out", str(out)]) == 0
        payload = json.loads((out / "bounds_resources.json").read_text())
        assert payload["min"] == pytest.approx(0, abs=1e-6)
        assert payload["max"] == pytest.approx(2, abs=1e-6)
        for key in ("witness_min", "witness_max"):
            assert all(tuple(e["assignment"]) in S_STAR
                       for e in payload[key]["support"])

    def test_expenditure_equals_resources_here(self, config_path, tmp_path):
        # unit obtainment cost and free assignment: spend == obtain
        out = tmp_path / "out"
        assert main(["bounds", "--config", config_path,
                     "--statistic", "expenditure", "--out", str(out)]) == 0
        payload = json.loads((out / "bounds_expenditure.json").read_text())
        assert payload["min"] == pytest.approx(0, abs=1e-6)
        assert payload["max"] == pytest.approx(2, abs=1e-6)


class TestSweep:
    def test_single_point(self, tmp_path):
        spec = _write_spec(tmp_path, SMALL_SWEEP)
        out = tmp_path / "out"
        assert main(["sweep", "--spec", spec, "--out", str(out),
                     "--jobs", "1"]) == 0
        text = (out / "sweep.csv").read_text().splitlines()
        assert text[0] == SWEEP_CSV_HEADER
        rows = list(csv.DictReader(text))
        assert len(rows) == 1
        row = rows[0]
        assert row["error"] == ""
        assert (row["n"], row["D_A"], row["D_B"]) == ("2", "2", "2")
        assert float(row["min_resources"]) == pytest.approx(0, abs=1e-6)
        assert float(row["max_resources"]) == pytest.approx(2, abs=1e-6)
        assert float(row["value"]) == pytest.approx(0, abs=1e-6)
        int(row["solve_ms"])  # integer milliseconds

    def test_parallel_matches_serial(self, tmp_path):
        spec = dict(SMALL_SWEEP)
        spec["c0_inv"] = {"min": 1, "max": 2, "interval": 1}
        spec_path = _write_spec(tmp_path, spec)

        def run(jobs, name):
            out = tmp_path / name
            assert main(["sweep", "--spec", spec_path, "--out", str(out),
                         "--jobs", str(jobs)]) == 0
            rows = list(csv.DictReader(
                (out / "sweep.csv").read_text().splitlines()))
            for r in rows:
                del r["solve_ms"]
            return rows

        assert run(1, "serial") == run(2, "parallel")

    def test_bad_jobs(self, tmp_path):
        spec = _write_spec(tmp_path, SMALL_SWEEP)
        assert main(["sweep", "--spec", spec, "--out", str(tmp_path / "o"),
                     "--jobs", "0"]) == 2


class TestCheckHypothesis:
    def test_small_grid_passes(self, tmp_path, capsys):
        spec = _write_spec(tmp_path, {
            "n": {"min": 2, "max": 2},
            "budget_A": {"min": 4, "max": 4},
            "budget_B": {"min": 4, "max": 4},
            "c0_inv": {"min": 1, "max": 3, "interval": 1},
        })
        out = tmp_path / "out"
        assert main(["check-hypothesis", "--spec", spec,
                     "--out", str(out)]) == 0
        stdout = capsys.readouterr().out
        assert "3/3 points pass" in stdout
        assert stdout.count("PASS") == 3
        report = json.loads((out / "hypothesis_report.json").read_text())
        assert report["summary"]["all_pass"] is True
        assert [p["case"] for p in report["points"]] == [3, 3, 1]

    def test_unequal_budgets_rejected(self, tmp_path, capsys):
        spec = _write_spec(tmp_path, {
            "n": {"min": 2, "max": 2},
            "budget_A": {"min": 4, "max": 4},
            "budget_B": {"min": 5, "max": 5},
            "c0_inv": {"min": 1, "max": 1, "interval": 1},
        })
        assert main(["check-hypothesis", "--spec", spec,
                     "--out", str(tmp_path / "o")]) == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["type"] == "ConfigError"


class TestClassifyCase:
    @pytest.mark.parametrize("n, d, c0_inv, case", [
        (2, 4, 3.0, 1),    # D <= n(q-1)
        (4, 40, 11.0, 1),
        (4, 40, 4.5, 2),   # non-integer inverse cost
        (2, 4, 1.0, 3),
        (4, 40, 10.0, 3),
    ])
    def test_cases(self, n, d, c0_inv, case):
        assert classify_hypothesis_case(n, d, c0_inv) == case


class TestOracleDiff:
    def test_within_tolerance(self, config_path, capsys):
        assert main(["oracle-diff", "--config", config_path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["within_tolerance"] is True
        assert report["abs_difference"] <= 1e-6
        assert report["certificate"]["is_equilibrium"] is True
        assert report["oracle_value"] == pytest.approx(0, abs=1e-12)


class TestLpStats:
    def test_report(self, config_path, capsys):
        assert main(["lp-stats", "--config", config_path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["num_vars"] == 49
        assert report["num_constraints"] == 49
        assert report["edges_self"] == 18
        assert report["edges_opp"] == 18
        assert report["n_hat"] == 3
        assert report["status"] == "optimal"
        assert report["value"] == pytest.approx(0, abs=1e-8)


class TestErrorPaths:
    def test_missing_config(self, tmp_path, capsys):
        assert main(["solve", "--config", str(tmp_path / "nope.json"),
                     "--player", "A", "--out", str(tmp_path)]) == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["type"] == "ConfigError"

    def test_malformed_config(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["solve", "--config", str(path),
                     "--player", "A", "--out", str(tmp_path)]) == 2
        assert "error" in capsys.readouterr().err

    def test_invalid_game_values(self, tmp_path, capsys):
        cfg = dict(EXAMPLE_CONFIG)
        cfg["budget_A"] = -1
        path = tmp_path / "neg.json"
        path.write_text(json.dumps(cfg))
        assert main(["lp-stats", "--config", str(path)]) == 2

    def test_unknown_player_rejected_by_parser(self, config_path, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--config", config_path,
                  "--player", "C", "--out", str(tmp_path)])
        assert exc.value.code == 2

    def test_unknown_backend_env(self, config_path, monkeypatch, capsys):
        monkeypatch.setenv("COSTBLOTTO_LP_BACKEND", "glop")
        assert main(["oracle-diff", "--config", config_path]) == 2
        err = json.loads(capsys.readouterr().err)
        assert "glop" in err["error"]["message"]
