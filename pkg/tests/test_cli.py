"""Tests for the command line surface, runners and writers."""
import json
from pathlib import Path

import pytest

from toeplab import __version__
from toeplab.core.exceptions import ErrorCode, ValidationException
from toeplab.presentation.cli import load_config, main
from toeplab.presentation.runners import RUNNERS, build_report, run_checks
from toeplab.presentation.writers import canonical_json, write_run
from toeplab.schemas.experiment import ExperimentConfig

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"
MONTE_CARLO_CONFIGS = {"01_normalization.json", "04_pinpoint.json", "12_determinism.json"}


def _error(stderr: str) -> dict:
    """Error object printed after any log lines."""
    return json.loads(stderr[stderr.index("{") :])["error"]


def _shipped_configs() -> list:
    return [
        pytest.param(
            path,
            id=path.stem,
            marks=pytest.mark.slow if path.name in MONTE_CARLO_CONFIGS else (),
        )
        for path in sorted(CONFIG_DIR.glob("*.json"))
    ]


class TestLoadConfig:
    """Tests for config loading and overrides."""

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationException) as exc_info:
            load_config(tmp_path / "absent.json")

        assert exc_info.value.error_code == ErrorCode.INVALID_CONFIG
        assert exc_info.value.exit_code == 2

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")

        with pytest.raises(ValidationException) as exc_info:
            load_config(path)

        assert exc_info.value.details["line"] == 1

    def test_not_an_object(self, write_config):
        with pytest.raises(ValidationException):
            load_config(write_config([1, 2, 3]))

    def test_validation_errors_listed(self, write_config, pinpoint_config):
        pinpoint_config["n"] = 0

        with pytest.raises(ValidationException) as exc_info:
            load_config(write_config(pinpoint_config))

        assert any(error["loc"] == "n" for error in exc_info.value.details["errors"])

    def test_overrides(self, tmp_path, write_config, pinpoint_config):
        config = load_config(
            write_config(pinpoint_config),
            checks=["oracle", "spectrum"],
            seed=99,
            out_dir=tmp_path / "out",
            tolerance_scale=10.0,
        )

        assert config.checks == ["spectrum", "oracle"]
        assert config.mc.seed == 99
        assert config.output_dir == str(tmp_path / "out")
        assert config.tolerances.oracle == pytest.approx(1e-5)

    def test_tolerance_scale_positive(self, write_config, pinpoint_config):
        with pytest.raises(ValidationException):
            load_config(write_config(pinpoint_config), tolerance_scale=0.0)


class TestRunners:
    """Tests for check execution and reports."""

    def test_registry(self):
        assert set(RUNNERS) == {
            "spectrum",
            "assemble",
            "commute",
            "oracle",
            "geometry",
            "rkh-algebra",
            "normalization",
        }

    async def test_run_checks_in_order(self, pinpoint_config):
        pinpoint_config["checks"] = ["oracle", "assemble", "spectrum"]
        config = ExperimentConfig.model_validate(pinpoint_config)

        checks = await run_checks(config, max_workers=2)

        assert [c.check for c in checks] == ["spectrum", "assemble", "oracle"]
        assert all(c.passed for c in checks)

    async def test_spectrum_targets(self, pinpoint_config):
        config = ExperimentConfig.model_validate(pinpoint_config)

        spectrum = (await run_checks(config))[0]

        target = spectrum.records[0]
        assert spectrum.summary["targets"] == 1
        assert target["pass"]
        assert target["value"][0] == pytest.approx(1 / 3, abs=1e-15)

    async def test_write_run_is_deterministic(self, tmp_path, pinpoint_config):
        config = ExperimentConfig.model_validate(pinpoint_config)
        report = build_report(config, await run_checks(config))

        first = write_run(report, tmp_path / "a")
        second = write_run(report, tmp_path / "b")

        assert [p.name for p in first] == [p.name for p in second]
        for a, b in zip(first, second):
            assert a.read_bytes() == b.read_bytes()
        assert json.loads((tmp_path / "a" / "report.json").read_text(encoding="utf-8"))["passed"]


class TestMain:
    """Tests for main() exit statuses and output."""

    def test_run_passes(self, tmp_path, capsys, write_config, pinpoint_config):
        out = tmp_path / "run"

        status = main(["run", "--config", str(write_config(pinpoint_config)), "--out", str(out)])

        assert status == 0
        assert json.loads(capsys.readouterr().out)["passed"] is True
        assert (out / "report.json").exists()
        assert (out / "spectrum.json").exists()

    def test_runs_are_byte_identical(self, tmp_path, write_config, pinpoint_config):
        path = write_config(pinpoint_config)

        assert main(["run", "--config", str(path), "--out", str(tmp_path / "a")]) == 0
        assert main(["run", "--config", str(path), "--out", str(tmp_path / "b")]) == 0

        names = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
        for name in names:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_failed_check(self, tmp_path, capsys, write_config, pinpoint_config):
        pinpoint_config["spectrum"]["expected"][0]["value"] = 0.5

        config_path = str(write_config(pinpoint_config))

        status = main(["run", "--config", config_path, "--out", str(tmp_path)])

        captured = capsys.readouterr()
        assert status == 1
        assert json.loads(captured.out)["checks"]["spectrum"] is False
        assert _error(captured.err)["code"] == ErrorCode.CHECK_FAILED

    def test_config_error(self, tmp_path, capsys):
        status = main(["run", "--config", str(tmp_path / "absent.json")])

        assert status == 2
        assert _error(capsys.readouterr().err)["code"] == ErrorCode.INVALID_CONFIG

    def test_numerical_error(self, tmp_path, write_config, pinpoint_config):
        """Test a quadrature failure maps to exit status 3."""
        pinpoint_config.update(
            {
                "n": 1,
                "partition": [1],
                "symbols": [{"family": "tabulated", "params": {"name": "cosine"}}],
                "checks": ["spectrum"],
                "spectrum": {},
                "quadrature": {"nodes_per_axis": 8, "tolerance": 1e-15},
            }
        )

        config_path = str(write_config(pinpoint_config))

        assert main(["run", "--config", config_path, "--out", str(tmp_path)]) == 3

    def test_schema(self, tmp_path):
        out = tmp_path / "schema.json"

        assert main(["schema", "--out", str(out)]) == 0
        assert json.loads(out.read_text(encoding="utf-8")) == json.loads(
            canonical_json(ExperimentConfig.model_json_schema())
        )

    def test_version(self, capsys):
        assert main(["version"]) == 0
        assert __version__ in capsys.readouterr().out

    def test_unknown_check(self, write_config, pinpoint_config):
        with pytest.raises(SystemExit):
            main(["run", "--config", str(write_config(pinpoint_config)), "--check", "teleport"])


class TestShippedConfigs:
    """End-to-end runs of every config under configs/."""

    def test_configs_present(self):
        names = {path.name for path in CONFIG_DIR.glob("*.json")}

        assert {
            "02_identity_numeric.json",
            "02_identity_numeric_k4.json",
            "02_identity_numeric_k112.json",
            "11_geometry.json",
        } <= names

    @pytest.mark.parametrize("path", _shipped_configs())
    def test_config_passes(self, tmp_path, capsys, path):
        status = main(["run", "--config", str(path), "--out", str(tmp_path)])

        summary = json.loads(capsys.readouterr().out)
        assert summary["passed"] is True, summary["checks"]
        assert status == 0
        assert (tmp_path / "report.json").exists()
