import json
from pathlib import Path

import pytest

from src.exceptions import ConfigError, HypothesisViolation
from src.integration.lab_runner import PRESETS
from src.systems.catalog import make_critical, make_mobius
from src.systems.hypotheses import check_hypotheses
from src.validators.config_validator import ConfigValidator, deep_merge

RECIPES = sorted(Path("data/experiments").glob("*.json"))


@pytest.fixture
def validator(monkeypatch):
    monkeypatch.delenv("LAB_OUTPUT_DIR", raising=False)
    return ConfigValidator()


def write_config(tmp_path, payload):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload))
    return str(path)


class TestLoading:
    async def test_defaults_resolve(self, validator):
        config = await validator.validate_config()
        assert config.system.family == "critical"
        assert config.system.parameter == 0.5j
        assert config.run.n_steps == 1_000_000
        assert config.output.directory == "output"

    @pytest.mark.parametrize("recipe", RECIPES, ids=lambda path: path.stem)
    async def test_checked_in_recipes(self, validator, recipe):
        await validator.validate_config(str(recipe))

    async def test_missing_file(self, validator, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            await validator.validate_config(str(tmp_path / "absent.json"))

    async def test_malformed_json(self, validator, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            await validator.validate_config(str(path))

    async def test_unknown_key(self, validator, tmp_path):
        with pytest.raises(ConfigError, match="run"):
            await validator.validate_config(write_config(tmp_path, {"run": {"stepz": 10}}))

    async def test_out_of_range_value(self, validator, tmp_path):
        with pytest.raises(ConfigError):
            await validator.validate_config(write_config(tmp_path, {"system": {"p0": 1.5}}))

    async def test_mobius_needs_mu(self, tmp_path, monkeypatch):
        monkeypatch.delenv("LAB_OUTPUT_DIR", raising=False)
        defaults = tmp_path / "defaults.yaml"
        lines = Path("config/defaults.yaml").read_text().splitlines()
        defaults.write_text("\n".join(line for line in lines if not line.strip().startswith("mu:")))
        validator = ConfigValidator(defaults_path=defaults)
        with pytest.raises(ConfigError, match="mu"):
            await validator.validate_config(overrides={"system": {"family": "mobius"}})


class TestLayering:
    async def test_cli_overrides_file(self, validator, tmp_path):
        path = write_config(tmp_path, {"run": {"n_steps": 500, "trials": 3}})
        config = await validator.validate_config(path, {"run": {"n_steps": 700}})
        assert config.run.n_steps == 700
        assert config.run.trials == 3

    async def test_environment_sets_output_directory(self, validator, monkeypatch, tmp_path):
        monkeypatch.setenv("LAB_OUTPUT_DIR", str(tmp_path / "env"))
        config = await validator.validate_config()
        assert config.output.directory == str(tmp_path / "env")
        config = await validator.validate_config(overrides={"output": {"directory": "cli"}})
        assert config.output.directory == "cli"

    async def test_parameter_goes_to_lambda(self, validator):
        config = await validator.validate_config(parameter=(0.1, 0.2))
        assert config.system.parameter == 0.1 + 0.2j

    async def test_parameter_goes_to_mu_for_mobius(self, validator):
        config = await validator.validate_config(parameter=(2.0, 0.5), preset=PRESETS["mobius"])
        assert config.system.family == "mobius"
        assert config.system.parameter == 2.0 + 0.5j
        assert config.system.lam == (0.0, 0.5)

    async def test_preset_sits_below_run_file(self, validator, tmp_path):
        path = write_config(tmp_path, {"system": {"p0": 0.7}})
        config = await validator.validate_config(path, preset=PRESETS["logistic"])
        assert config.system.family == "logistic"
        assert config.system.p0 == 0.7
        assert config.run.epsilon == 0.05

    async def test_hash_tracks_content(self, validator):
        first = await validator.validate_config()
        second = await validator.validate_config()
        third = await validator.validate_config(overrides={"run": {"seed": 1}})
        assert first.config_hash() == second.config_hash()
        assert first.config_hash() != third.config_hash()
        assert first.resolved()["system"]["lambda"] == [0.0, 0.5]

    def test_deep_merge_leaves_inputs(self):
        base = {"a": {"b": 1, "c": 2}}
        merged = deep_merge(base, {"a": {"b": 3}})
        assert merged == {"a": {"b": 3, "c": 2}}
        assert base == {"a": {"b": 1, "c": 2}}


class TestHypothesisRules:
    def test_required_flags(self, validator):
        assert validator.required_flags("coverage", "critical") == ["dense_orbits_applies"]
        assert validator.required_flags("simulate", "critical") == []
        assert validator.required_flags("mobius", "mobius") == ["mobius_verdict"]

    def test_violation_raises_with_report(self, validator):
        report = check_hypotheses(make_critical(0.5, 0.6))
        with pytest.raises(HypothesisViolation) as info:
            validator.enforce_hypotheses("coverage", report)
        assert info.value.report["dense_orbits_applies"] is False

    def test_force_downgrades_to_warning(self, validator):
        report = check_hypotheses(make_critical(0.5, 0.6))
        assert validator.enforce_hypotheses("coverage", report, force=True) == ["dense_orbits_applies"]

    def test_satisfied_hypotheses(self, validator):
        assert validator.enforce_hypotheses("occupation", check_hypotheses(make_critical(0.5j, 0.6))) == []
        assert validator.enforce_hypotheses("measure", check_hypotheses(make_mobius(1.2j))) == []
