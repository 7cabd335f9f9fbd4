"""Command line front end: output shapes, exit codes, determinism."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

import gravlink.cli as cli
from gravlink import ConvergenceError
from gravlink.scenario import RESULT_FIELDS

LEO_CONFIG = {
    "body": "earth",
    "emitter": "ground",
    "receiver": "iss",
    "source": "spdc_blue",
    "protocol": {"kind": "entangle_qkd"},
    "monte_carlo": {"trials": 20_000, "seed": 99},
}


def run_cli(*args: str):
    return subprocess.run(
        [sys.executable, "-m", "gravlink", *args],
        capture_output=True,
        text=True,
        timeout=120,
    )


def _rows(proc):
    assert proc.returncode == 0, proc.stderr
    return json.loads(proc.stdout)["rows"]


@pytest.fixture()
def leo_config(tmp_path):
    path = tmp_path / "leo.json"
    path.write_text(json.dumps(LEO_CONFIG))
    return path


class TestExitCodes:
    def test_missing_subcommand(self):
        assert run_cli().returncode == 1

    def test_unknown_flag(self):
        assert run_cli("redshift", "--receiver", "iss", "--bogus").returncode == 1

    def test_missing_receiver(self):
        proc = run_cli("redshift")
        assert proc.returncode == 1
        assert "--receiver" in proc.stderr

    def test_config_error_names_the_field(self, tmp_path):
        path = tmp_path / "bad.json"
        cfg = dict(LEO_CONFIG, source={"peak_hz": 700e12, "width_hz": -1.0})
        path.write_text(json.dumps(cfg))
        proc = run_cli("run", str(path))
        assert proc.returncode == 1
        assert "source.width_hz" in proc.stderr

    def test_missing_config_file(self, tmp_path):
        proc = run_cli("run", str(tmp_path / "nope.json"))
        assert proc.returncode == 1

    def test_precision_out_of_range(self):
        assert run_cli("redshift", "--receiver", "iss", "--precision", "18").returncode == 1
        assert run_cli("redshift", "--receiver", "iss", "--precision", "0").returncode == 1

    def test_numerical_failure_maps_to_two(self, monkeypatch, capsys):
        def explode(args):
            raise ConvergenceError("did not settle")

        monkeypatch.setattr(cli, "_cmd_redshift", explode)
        assert cli.main(["redshift", "--receiver", "iss"]) == 2
        assert "numerical failure" in capsys.readouterr().err

    def test_failed_table_row_maps_to_three(self, monkeypatch, capsys):
        row = {
            "quantity": "x", "reference": 1.0, "computed": 2.0,
            "deviation": 1.0, "tolerance": 0.1, "verdict": "fail", "note": "",
        }
        monkeypatch.setattr(cli, "paper_table", lambda: [row])
        assert cli.main(["paper-table"]) == 3
        capsys.readouterr()


class TestRedshift:
    def test_json_row(self):
        rows = _rows(run_cli("redshift", "--receiver", "iss", "--precision", "17"))
        row = rows[0]
        assert row["delta"] == pytest.approx(1.4318478306647888e-10, rel=1e-12)
        assert row["sign"] == "down"
        assert row["redshift_ratio"] > 1.0
        assert row["chi"] == pytest.approx(1.0 / row["redshift_ratio"], rel=1e-15)
        assert row["travel_time_s"] == pytest.approx(0.0013342563825941988, rel=1e-12)

    def test_far_field_travel_time_is_null(self):
        rows = _rows(run_cli("redshift", "--receiver", "far_field"))
        assert rows[0]["travel_time_s"] is None
        assert rows[0]["sign"] == "up"

    def test_explicit_geometry(self):
        rows = _rows(
            run_cli(
                "redshift",
                "--mass-kg", "0", "--body-radius-m", "6371e3",
                "--emitter-radius-m", "6371e3",
                "--receiver-radius-m", "6771e3", "--receiver-motion", "static",
            )
        )
        assert rows[0]["delta"] == 0.0
        assert rows[0]["redshift_ratio"] == 1.0

    def test_preset_conflicts_are_rejected(self):
        proc = run_cli("redshift", "--receiver", "iss", "--body", "earth", "--mass-kg", "1")
        assert proc.returncode == 1


class TestOverlap:
    def test_delta_bypass(self):
        rows = _rows(
            run_cli("overlap", "--delta", "3.4805390951444395e-10", "--sign", "up",
                    "--precision", "17")
        )
        assert rows[0]["Delta"] == pytest.approx(0.9926075412928603, rel=1e-13)
        assert rows[0]["q"] == pytest.approx(0.014730268968542607, rel=1e-13)

    def test_quadrature_cross_check(self):
        rows = _rows(
            run_cli("overlap", "--receiver", "iss", "--quadrature", "--precision", "17")
        )
        row = rows[0]
        assert row["quadrature_abserr"] < 1e-13
        # the two routes describe packets that differ by the rounding of
        # 1 -+ delta, so they may part at the 1e-9 level, never more
        assert abs(row["Delta_quadrature"] - row["Delta"]) < 5e-9

    def test_geometry_and_delta_conflict(self):
        proc = run_cli("overlap", "--receiver", "iss", "--delta", "1e-10")
        assert proc.returncode == 1


class TestEntangle:
    def test_dual_route_agreement(self):
        rows = _rows(run_cli("entangle", "--q", "0.0147", "--precision", "17"))
        row = rows[0]
        assert row["sim_vs_closed_max_abs"] < 1e-12
        assert row["p_d1"] == pytest.approx(0.25, abs=1e-12)
        assert row["p_d2"] == pytest.approx(0.25, abs=1e-12)
        assert row["negativity_d1_sim"] == pytest.approx(row["negativity"], abs=1e-10)
        assert row["p_share"] + row["p_diff"] == pytest.approx(1.0, abs=1e-15)
        assert row["qber"] == pytest.approx(0.00735, rel=1e-3)

    def test_geometry_route(self):
        rows = _rows(run_cli("entangle", "--receiver", "iss", "--precision", "17"))
        assert rows[0]["q"] == pytest.approx(0.0025083294283674017, rel=1e-13)


class TestQber:
    def test_closed_only(self):
        rows = _rows(run_cli("qber", "--q", "0.1"))
        assert rows[0] == {"q": 0.1, "qber": 0.05}

    def test_with_monte_carlo(self):
        rows = _rows(run_cli("qber", "--q", "0.1", "--trials", "50000", "--seed", "7"))
        row = rows[0]
        assert row["trials"] == 50_000 and row["seed"] == 7
        assert abs(row["qber_mc"] - 0.05) < 0.003
        again = _rows(run_cli("qber", "--q", "0.1", "--trials", "50000", "--seed", "7"))
        assert again[0]["qber_mc"] == row["qber_mc"]


class TestCvHomodyne:
    def test_three_scenarios_agree(self):
        rows = _rows(run_cli("cv-homodyne", "--alpha", "0.5", "--beta", "90"))
        assert [r["scenario"] for r in rows] == ["flat", "leo", "far_field"]
        assert all(r["pass"] for r in rows)
        assert {(r["x"], r["v"]) for r in rows} == {(90.0, 16200.0)}

    def test_mismatched_lo_demo(self):
        rows = _rows(
            run_cli("cv-homodyne", "--alpha", "0.5", "--beta", "90",
                    "--lo-peak-hz", "700.00001e12", "--lo-width-hz", "1e6")
        )
        assert all(r["x"] is None and not r["pass"] for r in rows)

    def test_half_specified_lo_is_rejected(self):
        proc = run_cli("cv-homodyne", "--alpha", "0.5", "--beta", "90",
                       "--lo-peak-hz", "700.00001e12")
        assert proc.returncode == 1


class TestRunAndSweep:
    def test_run_csv_header_is_the_result_schema(self, leo_config):
        proc = run_cli("run", str(leo_config), "--format", "csv")
        assert proc.returncode == 0
        data = [ln for ln in proc.stdout.splitlines() if not ln.startswith("#")]
        assert data[0] == ",".join(RESULT_FIELDS)
        cells = data[1].split(",")
        assert float(cells[RESULT_FIELDS.index("q")]) == pytest.approx(
            0.0025083294283674017, rel=1e-13
        )

    def test_run_reports_monte_carlo_extra_as_comment(self, leo_config):
        proc = run_cli("run", str(leo_config), "--format", "csv")
        assert any(ln.startswith("# extra qber_mc") for ln in proc.stdout.splitlines())

    def test_out_file_is_byte_identical_across_runs(self, leo_config, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        assert run_cli("run", str(leo_config), "--out", str(out1)).returncode == 0
        assert run_cli("run", str(leo_config), "--out", str(out2)).returncode == 0
        assert out1.read_bytes() == out2.read_bytes()
        doc = json.loads(out1.read_text())
        assert doc["q"] == pytest.approx(0.0025083294283674017, rel=1e-6)
        assert "qber_mc" in doc["extras"]

    def test_output_path_from_config(self, tmp_path):
        target = tmp_path / "from_config.json"
        cfg = dict(LEO_CONFIG, output={"format": "json", "path": str(target)})
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        assert run_cli("run", str(path)).returncode == 0
        assert target.exists()

    def test_sweep_log_grid(self, leo_config):
        proc = run_cli(
            "sweep", str(leo_config), "--parameter", "width_hz",
            "--grid", "log:1e6:1e12:4", "--format", "csv",
        )
        assert proc.returncode == 0
        data = [ln for ln in proc.stdout.splitlines() if not ln.startswith("#")]
        assert data[0] == ",".join(RESULT_FIELDS)
        q_col = RESULT_FIELDS.index("q")
        qs = [float(ln.split(",")[q_col]) for ln in data[1:]]
        assert len(qs) == 4
        assert all(a > b for a, b in zip(qs, qs[1:]))

    def test_sweep_comma_grid(self, leo_config):
        proc = run_cli(
            "sweep", str(leo_config), "--parameter", "q", "--grid", "0,0.5,1",
        )
        assert proc.returncode == 0
        rows = json.loads(proc.stdout)["rows"]
        assert [r["negativity"] for r in rows] == pytest.approx(
            [0.5, 0.353553390593, 0.0]
        )

    def test_sweep_bad_grid(self, leo_config):
        proc = run_cli("sweep", str(leo_config), "--parameter", "q", "--grid", "log:1:2")
        assert proc.returncode == 1


class TestPaperTable:
    def test_exit_zero_and_verdict_vocabulary(self):
        proc = run_cli("paper-table", "--format", "json")
        assert proc.returncode == 0
        rows = json.loads(proc.stdout)["rows"]
        assert len(rows) == 8
        verdicts = {r["verdict"] for r in rows}
        assert verdicts == {"ok", "paper-inconsistent"}

    def test_csv_carries_the_flag_literally(self):
        proc = run_cli("paper-table", "--format", "csv")
        assert proc.returncode == 0
        assert "paper-inconsistent" in proc.stdout
