import json

import pytest
from click.testing import CliRunner

from clusterlab.cli import EXIT_CONFIG, EXIT_IO, main
from clusterlab.sweep import load_rows


@pytest.fixture
def runner():
    return CliRunner()


def write_config(tmp_path, **kw):
    doc = {
        "alpha": 2, "n_qubits": 12, "p_s": 0.5, "p_u": 0.0,
        "burn_in_steps": 4, "sample_steps": 5, "n_circuits": 3,
        "master_seed": 7, "sweep": [{"axis": "p_s", "values": [0.3, 0.7]}],
        "output": "result.csv",
    }
    doc.update(kw)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(doc))
    return path


class TestSweepCommand:
    def test_happy_path(self, runner, tmp_path):
        cfg = write_config(tmp_path)
        result = runner.invoke(main, ["sweep", "--config", str(cfg)])
        assert result.exit_code == 0, result.output
        out_path = result.stdout.strip()
        assert out_path == str(tmp_path / "result.csv")
        assert len(load_rows(out_path)) == 4
        assert "point 1/2" in result.stderr  # progress stays off stdout

    def test_overrides(self, runner, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "other.csv"
        result = runner.invoke(main, [
            "sweep", "--config", str(cfg), "--out", str(out),
            "--n-circuits", "2", "--master-seed", "11", "--engine", "tableau"])
        assert result.exit_code == 0, result.output
        rows = load_rows(str(out))
        assert all(r["n_circuits"] == "2" for r in rows)
        assert all(r["master_seed"] == "11" for r in rows)
        assert all(r["engine"] == "tableau" for r in rows)

    def test_missing_config_is_io_error(self, runner, tmp_path):
        result = runner.invoke(main, ["sweep", "--config", str(tmp_path / "no.json")])
        assert result.exit_code == EXIT_IO

    def test_bad_config_is_config_error(self, runner, tmp_path):
        cfg = write_config(tmp_path, engine="magic")
        result = runner.invoke(main, ["sweep", "--config", str(cfg)])
        assert result.exit_code == EXIT_CONFIG
        assert "config error" in result.stderr

    def test_bad_engine_override(self, runner, tmp_path):
        cfg = write_config(tmp_path)
        result = runner.invoke(main, ["sweep", "--config", str(cfg),
                                      "--engine", "magic"])
        assert result.exit_code == EXIT_CONFIG


class TestMergeCommand:
    def test_merge_and_conflict(self, runner, tmp_path):
        a = write_config(tmp_path, output="a.csv",
                         sweep=[{"axis": "p_s", "values": [0.3]}])
        runner.invoke(main, ["sweep", "--config", str(a)])
        b = write_config(tmp_path, output="b.csv",
                         sweep=[{"axis": "p_s", "values": [0.7]}])
        runner.invoke(main, ["sweep", "--config", str(b)])
        merged = tmp_path / "merged.csv"
        result = runner.invoke(main, ["merge", str(tmp_path / "a.csv"),
                                      str(tmp_path / "b.csv"), "--out", str(merged)])
        assert result.exit_code == 0, result.output
        assert len(load_rows(str(merged))) == 4
        # conflicting rerun with a different seed under the same key is fine;
        # same key with different values is not
        rows = load_rows(str(tmp_path / "a.csv"))
        rows[0] = dict(rows[0], mean_abs="0.999")
        import clusterlab.sweep as sweep_mod
        sweep_mod.write_rows(str(tmp_path / "a2.csv"), rows)
        result = runner.invoke(main, ["merge", str(tmp_path / "a.csv"),
                                      str(tmp_path / "a2.csv"), "--out", str(merged)])
        assert result.exit_code == EXIT_CONFIG


class TestReportCommand:
    def test_phase_diagram_report(self, runner, tmp_path):
        cfg = write_config(tmp_path, sweep=[
            {"axis": "p_s", "values": [0.3, 0.7]},
            {"axis": "n_qubits", "values": [12, 16, 20]},
        ], n_circuits=4)
        runner.invoke(main, ["sweep", "--config", str(cfg)])
        result = runner.invoke(main, [
            "report", "--table", str(tmp_path / "result.csv"),
            "--mode", "phase-diagram"])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.stdout)
        assert doc["mode"] == "phase-diagram"
        assert len(doc["points"]) == 2
        for point in doc["points"]:
            assert point["label"] in ("SPT", "trivial", "volume",
                                      "SPT+SSB", "undetermined")

    def test_report_to_file(self, runner, tmp_path):
        cfg = write_config(tmp_path, sweep=[
            {"axis": "n_qubits", "values": [12, 16, 20]}], n_circuits=4)
        runner.invoke(main, ["sweep", "--config", str(cfg)])
        out = tmp_path / "report.json"
        result = runner.invoke(main, [
            "report", "--table", str(tmp_path / "result.csv"),
            "--mode", "phase-diagram", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert json.loads(out.read_text())["mode"] == "phase-diagram"

    def test_missing_table(self, runner, tmp_path):
        result = runner.invoke(main, ["report", "--table",
                                      str(tmp_path / "no.csv"),
                                      "--mode", "phase-diagram"])
        assert result.exit_code == EXIT_IO

    def test_bad_mode_rejected_by_click(self, runner, tmp_path):
        result = runner.invoke(main, ["report", "--table", "x.csv",
                                      "--mode", "bogus"])
        assert result.exit_code == 2


class TestCheckCommands:
    def test_duality_check(self, runner, tmp_path):
        out = tmp_path / "duality.json"
        result = runner.invoke(main, [
            "duality-check", "--alpha", "1", "--n-qubits", "8",
            "--seeds", "2", "--steps", "20", "--out", str(out)])
        assert result.exit_code == 0, result.output
        doc = json.loads(out.read_text())
        assert doc["passed"] is True
        assert doc["membership_checks"] == 2 * 20 * 8

    def test_oracle_xcheck(self, runner):
        result = runner.invoke(main, [
            "oracle-xcheck", "--alpha", "1", "--n-qubits", "6",
            "--seeds", "1", "--steps", "5"])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.stdout)
        assert doc["passed"] is True
        assert doc["max_expectation_diff"] <= doc["expectation_tolerance"]
