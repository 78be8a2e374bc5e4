import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from akgrowth.cli import main

WINDOW_CFG = """
schema = 1
n_points = 128
sigma = 1.0
rho = 0.75
gamma = 0.5
q = 0.0
A.kind = constant
A.value = 1.0
eta.kind = constant
eta.value = 1.0
K0.kind = cosine
K0.mean = 1.0
K0.amplitude = 0.4
K0.mode = 1
t_final = 10.0
n_steps = 200
seed = 2024
n_perturbations = 4
"""

RHO1_CFG = WINDOW_CFG.replace("rho = 0.75", "rho = 1.0")


@pytest.fixture()
def window_cfg(tmp_path):
    path = tmp_path / "window.cfg"
    path.write_text(WINDOW_CFG)
    return path


def read_json(path):
    return json.loads(Path(path).read_text())


class TestSolve:
    def test_homogeneous_outputs(self, tmp_path):
        cfg = tmp_path / "rho1.cfg"
        cfg.write_text(RHO1_CFG)
        out = tmp_path / "out"
        assert main(["solve", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
        hjb = read_json(out / "hjb.json")
        assert abs(hjb["lambda0"] - 1.0) < 1e-9
        assert abs(hjb["g"]) < 1e-12
        assert hjb["wellposed"] is True
        spectral = read_json(out / "spectral.json")
        assert len(spectral["eigenvalues"]) == 128
        assert read_json(out / "value.json")["value"] > 0

    def test_infeasible_exit_code(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(WINDOW_CFG.replace("rho = 0.75", "rho = 0.4"))
        assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "o"), "--quiet"]) == 2

    def test_broken_table_exit_code(self, tmp_path):
        cfg = tmp_path / "table.cfg"
        cfg.write_text(
            WINDOW_CFG.replace(
                "A.kind = constant\nA.value = 1.0",
                "A.kind = table\nA.values = 1.0, 2.0",
            )
        )
        out = tmp_path / "out"
        assert main(["solve", "--config", str(cfg), "--out", str(out), "--quiet"]) == 1
        assert not out.exists()  # validation happens before any output

    def test_missing_config_file(self, tmp_path):
        assert main(["solve", "--config", str(tmp_path / "absent.cfg"), "--quiet"]) == 1


class TestSimulate:
    def test_window_run_flags(self, window_cfg, tmp_path):
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(window_cfg), "--out", str(out), "--quiet"]) == 0
        stability = read_json(out / "stability.json")
        assert stability["admissibility_condition"] is True
        assert stability["admissible"] is True
        assert stability["bound_satisfied"] is True
        assert stability["dominance_ok"] is True
        assert abs(stability["M"] - 2.0) < 1e-9
        summary = read_json(out / "trajectory_summary.json")
        assert abs(summary["fitted_growth_rate"] - summary["g"]) < 1e-8
        assert (out / "trajectory.csv").exists()
        assert (out / "deviations.csv").exists()

    def test_condition_fails_positivity_reported_independently(self, tmp_path):
        cfg = tmp_path / "wide.cfg"
        cfg.write_text(WINDOW_CFG.replace("K0.amplitude = 0.4", "K0.amplitude = 0.6"))
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
        stability = read_json(out / "stability.json")
        assert stability["admissibility_condition"] is False  # 2*0.6 > 1
        assert isinstance(stability["admissible"], bool)

    def test_steady_state_start(self, tmp_path):
        cfg = tmp_path / "steady.cfg"
        cfg.write_text(WINDOW_CFG.replace("K0.amplitude = 0.4", "K0.amplitude = 0.0"))
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
        deviations = (out / "deviations.csv").read_text().strip().split("\n")[1:]
        assert all(float(line.split(",")[1]) < 1e-8 for line in deviations)


class TestVerify:
    def test_passes_and_is_deterministic(self, window_cfg, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["verify", "--config", str(window_cfg), "--out", str(out1), "--quiet"]) == 0
        assert main(["verify", "--config", str(window_cfg), "--out", str(out2), "--quiet"]) == 0
        bytes1 = (out1 / "audit.json").read_bytes()
        bytes2 = (out2 / "audit.json").read_bytes()
        assert bytes1 == bytes2
        audit = read_json(out1 / "audit.json")
        assert audit["all_dominated"] is True
        assert audit["rel_gap"] < 1e-6
        assert audit["max_hjb_residual"] < 1e-9
        assert audit["transversality"] is True
        assert audit["failed_check"] is None

    def test_variable_profiles_pass(self, tmp_path):
        # regression: spatially varying eta slows the discounted-value decay
        # along perturbed plans; the envelope check must still pass
        cfg = tmp_path / "variable.cfg"
        cfg.write_text(
            "schema = 1\n"
            "n_points = 64\n"
            "sigma = 2.0\nrho = 0.6\ngamma = 0.5\nq = 0.5\n"
            "A.kind = cosine\nA.mean = 1.0\nA.amplitude = 0.3\nA.mode = 1\n"
            "eta.kind = cosine\neta.mean = 1.0\neta.amplitude = 0.1\neta.mode = 2\n"
            "K0.kind = cosine\nK0.mean = 1.0\nK0.amplitude = 0.4\nK0.mode = 1\n"
            "t_final = 8.0\nn_steps = 160\nseed = 7\nn_perturbations = 3\n"
        )
        out = tmp_path / "out"
        assert main(["verify", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
        audit = read_json(out / "audit.json")
        assert audit["transversality"] is True
        assert audit["max_discounted_terminal_rel"] <= audit["perturbed_terminal_envelope"]
        # the slower admissible rate is genuinely in play here
        assert audit["max_discounted_terminal_rel"] > 1e-8

    def test_alpha_perturbation_names_residual(self, window_cfg, tmp_path):
        out = tmp_path / "out"
        code = main(
            [
                "verify", "--config", str(window_cfg), "--out", str(out),
                "--debug-perturb-alpha", "0.01", "--quiet",
            ]
        )
        assert code == 3
        audit = read_json(out / "audit.json")
        assert audit["failed_check"] == "hjb_residual"


class TestSweep:
    def test_grid_of_points(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text(WINDOW_CFG + "sweep.rho = 0.45, 0.75, 0.9\nsweep.gamma = 0.5, 2.0, 3.0\n")
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(cfg), "--out", str(out), "--quiet"]) == 0
        lines = (out / "sweep.csv").read_text().strip().split("\n")
        header = lines[0].split(",")
        assert len(lines) == 10
        rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
        infeasible = [row for row in rows if row["feasible"] == "false"]
        assert [row["rho"] for row in infeasible] == ["0.45000000000000001"]
        for row in rows:
            recomputed = (float(row["lambda0"]) - float(row["rho"])) / float(row["gamma"])
            assert abs(float(row["g"]) - recomputed) < 1e-12
            if row["feasible"] == "false":
                assert row["alpha"] == ""


class TestPerronAudit:
    def test_battery_passes(self, tmp_path):
        out = tmp_path / "out"
        assert main(["perron-audit", "--count", "20", "--seed", "4", "--out", str(out), "--quiet"]) == 0
        report = read_json(out / "perron.json")
        assert report["all_passed"] is True
        assert report["failures"] == []


class TestEntryPoint:
    def test_module_invocation(self, tmp_path):
        cfg = tmp_path / "window.cfg"
        cfg.write_text(WINDOW_CFG)
        env = dict(os.environ)
        src = str(Path(__file__).resolve().parents[1] / "src")
        env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
        proc = subprocess.run(
            [sys.executable, "-m", "akgrowth.cli", "solve", "--config", str(cfg),
             "--out", str(tmp_path / "out"), "--quiet"],
            env=env,
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
