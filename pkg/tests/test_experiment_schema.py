"""Tests for experiment config validation and the shipped JSON schema."""
import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from toeplab.domain.value_objects.symbols import CombinationSymbol, InversePowerSymbol
from toeplab.schemas.experiment import ExperimentConfig, SymbolLiteral, Tolerances

SCHEMA_PATH = Path(__file__).resolve().parents[1] / "schemas" / "experiment_config.schema.json"
CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


class TestExperimentConfig:
    """Tests for ExperimentConfig validation."""

    def test_normalizes_weights_and_checks(self, pinpoint_config):
        pinpoint_config["m"] = [3, 1, 3]
        pinpoint_config["checks"] = ["oracle", "spectrum", "oracle"]
        pinpoint_config["spectrum"]["expected"][0]["m"] = 1

        config = ExperimentConfig.model_validate(pinpoint_config)

        assert config.m == [1, 3]
        assert config.checks == ["spectrum", "oracle"]

    def test_single_weight(self, pinpoint_config):
        config = ExperimentConfig.model_validate(pinpoint_config)

        assert config.m == [1]
        assert config.k.parts == (2,)

    def test_seed_overrides_mc(self, pinpoint_config):
        config = ExperimentConfig.model_validate(pinpoint_config)

        assert config.mc.seed == 7

    def test_output_dir_not_dumped(self, pinpoint_config):
        pinpoint_config["output_dir"] = "somewhere/else"

        config = ExperimentConfig.model_validate(pinpoint_config)

        assert config.output_dir == "somewhere/else"
        assert "output_dir" not in config.model_dump(mode="json")

    def test_default_partition(self):
        config = ExperimentConfig.model_validate({"n": 3, "m": 2, "checks": ["normalization"]})

        assert config.k.parts == (3,)

    @pytest.mark.parametrize(
        "update",
        [
            {"unknown": 1},
            {"n": 0},
            {"m": [-1]},
            {"checks": []},
            {"checks": ["teleport"]},
            {"partition": [1, 2]},
            {"symbols": []},
            {"symbols": [{"family": "radial_monomial", "params": {"c": [2]}}]},
            {"symbols": [{"family": "bounded_rational", "params": {"c": [1, 0], "t": 1}}]},
            {"symbols": [{"family": "constant", "p": [1, 0]}]},
            {"symbols": [{"family": "constant", "p": [1, 0], "q": [1, 0]}]},
            {"symbols": [{"family": "constant", "p": [1, 0, 0], "q": [0, 1, 0]}]},
            {"symbols": [{"family": "tabulated", "params": {"name": "sawtooth"}}]},
            {"spectrum": {"expected": [{"symbol": 3, "m": 1, "alpha": [0, 1], "value": 0.5}]}},
            {"spectrum": {"expected": [{"symbol": 0, "m": 1, "alpha": [1, 1], "value": 0.5}]}},
            {"oracle": {"reproducing": [[2, 0]]}},
            {"seed": -5},
        ],
    )
    def test_rejects(self, pinpoint_config, update):
        pinpoint_config.update(update)

        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate(pinpoint_config)

    def test_closed_form_needs_closed_form_symbols(self, pinpoint_config):
        pinpoint_config["method"] = "closed_form"
        pinpoint_config["symbols"] = [{"family": "tabulated", "params": {"name": "gaussian"}}]
        pinpoint_config["spectrum"] = {}

        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate(pinpoint_config)

    def test_rkh_needs_bounds(self, pinpoint_config):
        pinpoint_config["checks"] = ["rkh-algebra"]

        with pytest.raises(ValidationError):
            ExperimentConfig.model_validate(pinpoint_config)

        pinpoint_config["h"] = [1]
        assert ExperimentConfig.model_validate(pinpoint_config).rkh_class().h == (1,)

    def test_sweep_needs_no_symbols(self):
        config = ExperimentConfig.model_validate(
            {
                "n": 4,
                "m": [1],
                "partition": [2, 2],
                "checks": ["commute"],
                "commute": {"sweep": True},
            }
        )

        assert config.symbols == []

    def test_shipped_configs_validate(self):
        paths = sorted(CONFIG_DIR.glob("*.json"))

        assert paths
        for path in paths:
            ExperimentConfig.model_validate(json.loads(path.read_text(encoding="utf-8")))


class TestSymbolLiteral:
    """Tests for JSON symbol literals."""

    def test_combination(self):
        literal = SymbolLiteral.model_validate(
            {
                "family": "combination",
                "params": {
                    "terms": [
                        {"family": "constant", "params": {"c": 0.25}},
                        {"family": "inverse_power", "params": {"t": 2}},
                    ]
                },
            }
        )

        radial = literal.to_symbol(2).radial

        assert isinstance(radial, CombinationSymbol)
        assert isinstance(radial.terms[1], InversePowerSymbol)

    def test_quasi_radial(self):
        sym = SymbolLiteral(family="inverse_power", params={"t": 1}).to_symbol(3)

        assert sym.is_quasi_radial
        assert sym.n == 3

    def test_combination_needs_terms(self):
        with pytest.raises(ValidationError):
            SymbolLiteral(family="combination", params={})


class TestTolerances:
    """Tests for threshold scaling."""

    def test_scaled(self):
        scaled = Tolerances().scaled(10.0)

        assert scaled.commute == pytest.approx(Tolerances().commute * 10)
        assert scaled.oracle == pytest.approx(Tolerances().oracle * 10)
        assert scaled.separation_floor == Tolerances().separation_floor

    def test_scaled_keeps_floor_above_commute(self):
        scaled = Tolerances().scaled(1e7)

        assert scaled.separation_floor > scaled.commute

    def test_floor_must_exceed_commute(self):
        with pytest.raises(ValidationError):
            Tolerances(commute=1e-3, separation_floor=1e-4)


class TestShippedSchema:
    def test_matches_model(self):
        shipped = json.loads(SCHEMA_PATH.read_text(encoding="utf-8"))
        generated = ExperimentConfig.model_json_schema()

        assert set(shipped["properties"]) == set(generated["properties"])
        assert set(shipped["$defs"]) == set(generated["$defs"])
        assert shipped["required"] == generated["required"]
