"""CLI tests: config parsing, scenario runs, determinism, exit codes."""

import json
import os

import numpy as np
import pytest

from uscqed import cli
from uscqed.errors import ConfigError


def write_config(tmp_path, body, name="scenario.ini"):
    path = tmp_path / name
    path.write_text(body)
    return str(path)


class TestConfigParsing:
    def test_minimal_config(self, tmp_path):
        path = write_config(tmp_path, "[scenario]\nname = fig2b_rabi\n")
        config = cli.load_config(path)
        assert config.scenario == "fig2b_rabi"
        assert config.params.delta == 1.0
        assert config.params.n_max == 20

    def test_unknown_field_suggestion(self, tmp_path):
        path = write_config(
            tmp_path, "[scenario]\nname = fig2b_rabi\n\n[params]\nlamda = 0.3\n"
        )
        with pytest.raises(ConfigError, match="lambda"):
            cli.load_config(path)

    def test_unknown_scenario_rejected(self, tmp_path):
        path = write_config(tmp_path, "[scenario]\nname = fig2x\n")
        with pytest.raises(ConfigError, match="fig2"):
            cli.load_config(path)

    def test_unknown_section_rejected(self, tmp_path):
        path = write_config(
            tmp_path, "[scenario]\nname = fig2b_rabi\n\n[grids]\nstart = 0\n"
        )
        with pytest.raises(ConfigError, match="grid"):
            cli.load_config(path)

    def test_zero_step_rejected(self, tmp_path):
        path = write_config(
            tmp_path,
            "[scenario]\nname = fig2b_rabi\n\n[grid]\nstart = 0.1\nstop = 0.2\nstep = 0\n",
        )
        with pytest.raises(ConfigError, match="step"):
            cli.load_config(path)

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            cli.load_config("/nonexistent/config.ini")

    def test_custom_needs_axis(self, tmp_path):
        path = write_config(tmp_path, "[scenario]\nname = custom\n")
        with pytest.raises(ConfigError, match="axis"):
            cli.load_config(path)

    def test_axis_only_for_custom(self, tmp_path):
        path = write_config(
            tmp_path, "[scenario]\nname = fig2b_rabi\naxis = lambda\n"
        )
        with pytest.raises(ConfigError, match="axis"):
            cli.load_config(path)

    def test_overrides_win(self, tmp_path):
        path = write_config(tmp_path, "[scenario]\nname = fig3b_sweep\n")
        config = cli.load_config(
            path, {"n_levels": 10, "spectral_weight": "flat", "n_max": 18}
        )
        assert config.n_levels == 10
        assert config.spectral_weight == "flat"
        assert config.params.n_max == 18

    def test_full_time_rejected_for_stationary_scenarios(self, tmp_path):
        path = write_config(
            tmp_path,
            "[scenario]\nname = fig3b_sweep\n\n[dynamics]\ndrive_mode = full_time\n",
        )
        with pytest.raises(ConfigError, match="dressed_rwa"):
            cli.load_config(path)


class TestGridPoints:
    def test_inclusive_endpoint(self):
        pts = cli.grid_points((0.0, 0.5, 0.1))
        np.testing.assert_allclose(pts, [0.0, 0.1, 0.2, 0.3, 0.4, 0.5], atol=1e-12)

    def test_non_divisible_span(self):
        pts = cli.grid_points((0.0, 0.55, 0.2))
        np.testing.assert_allclose(pts, [0.0, 0.2, 0.4], atol=1e-12)


class TestValidate:
    def test_fig3c_report_dimensions(self, tmp_path, capsys):
        path = write_config(tmp_path, "[scenario]\nname = fig3c_tau\n")
        rc = cli.main(["validate", "--config", path])
        out = capsys.readouterr().out
        assert rc == 0
        assert "144^2" in out
        assert "seconds-scale" in out
        assert "config OK" in out
        assert not (tmp_path / "out").exists()

    def test_validate_config_error_exit_code(self, tmp_path, capsys):
        path = write_config(
            tmp_path, "[scenario]\nname = fig2b_rabi\n\n[params]\nlamda = 1\n"
        )
        rc = cli.main(["validate", "--config", path])
        assert rc == cli.EXIT_CONFIG
        assert "lambda" in capsys.readouterr().err


class TestRun:
    def test_custom_lambda_sweep_matches_library(self, tmp_path, capsys):
        body = (
            "[scenario]\nname = custom\naxis = lambda\n\n"
            "[params]\ndelta = 0.5\n\n"
            "[grid]\nstart = 0.0\nstop = 0.1\nstep = 0.05\n\n"
            f"[output]\ndir = {tmp_path}/out\n"
        )
        path = write_config(tmp_path, body)
        rc = cli.main(["run", "--config", path])
        assert rc == 0
        data = np.genfromtxt(
            tmp_path / "out" / "custom.csv", delimiter=",", names=True
        )
        # detuned qubit, lambda = 0 included: everything deeply antibunched
        assert data["g2_sigma_x"].max() < 1e-6

        from uscqed import correlations
        from uscqed.models import SystemParams

        cols, rows = correlations.sweep_g2_zero(
            SystemParams(delta=0.5, n_max=20), np.array([0.0, 0.05, 0.1])
        )
        np.testing.assert_allclose(
            np.column_stack(
                [data["lambda"], data["g2_sigma_x"], data["g2_d_sigma_x"], data["g2_dd_sigma_x"]]
            ),
            rows,
            rtol=1e-10,
            atol=1e-300,
        )

    def test_run_is_deterministic(self, tmp_path):
        body = (
            "[scenario]\nname = fig2b_rabi\n\n"
            "[grid]\nstart = 0.05\nstop = 0.15\nstep = 0.05\n\n"
        )
        path = write_config(tmp_path, body)
        rc1 = cli.main(["run", "--config", path, "--out", str(tmp_path / "a")])
        rc2 = cli.main(
            ["run", "--config", path, "--out", str(tmp_path / "b"), "--threads", "2"]
        )
        assert rc1 == rc2 == 0
        a = (tmp_path / "a" / "fig2b.csv").read_bytes()
        b = (tmp_path / "b" / "fig2b.csv").read_bytes()
        assert a == b

    def test_manifest_records_defaults(self, tmp_path):
        body = (
            "[scenario]\nname = fig2b_rabi\n\n"
            "[grid]\nstart = 0.05\nstop = 0.1\nstep = 0.05\n\n"
        )
        path = write_config(tmp_path, body)
        assert cli.main(["run", "--config", path, "--out", str(tmp_path / "o")]) == 0
        manifest = json.loads((tmp_path / "o" / "run_manifest.json").read_text())
        assert manifest["scenario"] == "fig2b_rabi"
        assert manifest["params"]["n_max"] == 20
        assert manifest["params"]["lambda"] == 0.0
        assert manifest["dynamics"]["spectral_weight"] == "ohmic"
        assert manifest["resolved_defaults"]["integrator_tol"] == 1e-9
        assert manifest["outputs"] == ["fig2b.csv"]
        assert "generated_at" in manifest

    def test_numerical_failure_exit_code(self, tmp_path, capsys):
        # lambda = 0 at exact resonance leaves the doublets degenerate, which
        # the labeling stage must report as a numerical failure
        body = (
            "[scenario]\nname = custom\naxis = lambda\n\n"
            "[params]\ndelta = 1.0\n\n"
            "[grid]\nstart = 0.0\nstop = 0.05\nstep = 0.05\n\n"
        )
        path = write_config(tmp_path, body)
        rc = cli.main(["run", "--config", path, "--out", str(tmp_path / "x")])
        assert rc == cli.EXIT_NUMERICAL
        assert "numerical failure" in capsys.readouterr().err

    def test_fig2a_crossing_visible(self, tmp_path):
        body = (
            "[scenario]\nname = fig2a_spectrum\n\n"
            "[grid]\nstart = 0.40\nstop = 0.46\nstep = 0.005\n\n"
        )
        path = write_config(tmp_path, body)
        assert cli.main(["run", "--config", path, "--out", str(tmp_path / "s")]) == 0
        rows = np.genfromtxt(
            tmp_path / "s" / "fig2a_rabi.csv",
            delimiter=",",
            names=True,
            dtype=None,
            encoding="utf-8",
        )
        gaps = {}
        for r in rows:
            if r["label"] in ("2-", "1+"):
                gaps.setdefault(r["sweep_value"], {})[r["label"]] = r["energy"]
        diffs = {x: v["2-"] - v["1+"] for x, v in gaps.items()}
        xs = sorted(diffs)
        signs = [np.sign(diffs[x]) for x in xs]
        assert signs[0] != signs[-1]  # the crossing happens inside the window
        # and the diamagnetic spectrum keeps a fixed order
        rows_d = np.genfromtxt(
            tmp_path / "s" / "fig2a_diamagnetic.csv",
            delimiter=",",
            names=True,
            dtype=None,
            encoding="utf-8",
        )
        gaps_d = {}
        for r in rows_d:
            if r["label"] in ("2-", "1+"):
                gaps_d.setdefault(r["sweep_value"], {})[r["label"]] = r["energy"]
        signs_d = {np.sign(v["2-"] - v["1+"]) for v in gaps_d.values()}
        assert len(signs_d) == 1


class TestListScenarios:
    def test_catalogue(self, capsys):
        assert cli.main(["list-scenarios"]) == 0
        out = capsys.readouterr().out
        for name in cli.SCENARIOS:
            assert name in out
