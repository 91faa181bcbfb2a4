"""
Run configuration loading and validation.

A run file is checked against config/run_config.schema.json with jsonschema,
merged over config/defaults.yaml and parsed into pydantic models. Hypothesis
requirements per subcommand come from config/hypothesis_rules.yaml.
"""

import copy
import hashlib
import json
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

import yaml
from jsonschema import ValidationError, validate
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator
from pydantic import ValidationError as ModelValidationError

from ..exceptions import ConfigError, HypothesisViolation
from ..systems.catalog import IfsSystem, make_system
from ..systems.hypotheses import HypothesisReport

CONFIG_DIR = Path(__file__).resolve().parents[2] / "config"
SCHEMA_PATH = CONFIG_DIR / "run_config.schema.json"
DEFAULTS_PATH = CONFIG_DIR / "defaults.yaml"
RULES_PATH = CONFIG_DIR / "hypothesis_rules.yaml"
OUTPUT_DIR_ENV = "LAB_OUTPUT_DIR"

Pair = Tuple[float, float]


class _Block(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


class SystemBlock(_Block):
    family: Literal["critical", "mobius", "logistic"]
    lam: Optional[Pair] = Field(None, alias="lambda")
    mu: Optional[Pair] = None
    p0: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _parameter_present(self) -> "SystemBlock":
        if self.family == "critical" and self.lam is None:
            raise ValueError("critical family needs system.lambda")
        if self.family == "mobius" and self.mu is None:
            raise ValueError("mobius family needs system.mu")
        return self

    @property
    def parameter(self) -> complex:
        if self.family == "critical":
            return complex(*self.lam)
        if self.family == "mobius":
            return complex(*self.mu)
        return 0j

    def build(self, p0: Optional[float] = None) -> IfsSystem:
        return make_system(self.family, self.parameter, self.p0 if p0 is None else p0)


class RunBlock(_Block):
    seed: int = Field(ge=0)
    z0: Pair
    n_steps: int = Field(ge=1)
    trials: int = Field(ge=1)
    epsilon: float = Field(gt=0.0)
    r_far: float = Field(gt=1.0)
    burnin: int = Field(ge=0)
    cap: int = Field(ge=1)
    inner_radius: float = Field(gt=0.0)
    samples: int = Field(ge=1)
    trace_limit: int = Field(ge=1)
    threads: int = Field(ge=1)
    sojourn_target: int = Field(ge=0)
    max_trials: int = Field(ge=1)

    @property
    def start(self) -> complex:
        return complex(*self.z0)


class ProbeBlock(_Block):
    qmax: int = Field(ge=1)
    tol: float = Field(gt=0.0)
    depth: int = Field(ge=0)
    cells: int = Field(ge=1)
    budget: int = Field(ge=1)
    K_series: int = Field(ge=2)
    map: Literal["f0", "f1"]
    curve_samples: int = Field(ge=360)
    scale: float = Field(gt=0.0, le=0.01)
    cycles: int = Field(ge=0)
    hill_k: int = Field(ge=10)
    bootstrap: int = Field(ge=1)
    tail_exponents: List[int]
    near_radius: float = Field(gt=0.0)


class OutputBlock(_Block):
    directory: str
    formats: List[Literal["csv", "json"]]


class RunConfig(_Block):
    system: SystemBlock
    run: RunBlock
    probe: ProbeBlock
    output: OutputBlock

    def resolved(self) -> Dict[str, Any]:
        """Plain dict of every setting, aliases restored"""
        return self.model_dump(mode="json", by_alias=True)

    def canonical_json(self) -> str:
        return json.dumps(self.resolved(), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ConfigValidator:
    """Resolve run files against the published schema, the defaults and the CLI overrides"""

    def __init__(
        self,
        schema_path: Path = SCHEMA_PATH,
        defaults_path: Path = DEFAULTS_PATH,
        rules_path: Path = RULES_PATH,
    ):
        self.schema = self._load_json(Path(schema_path))
        self.defaults = self._load_yaml(Path(defaults_path))
        self.hypothesis_rules = self._load_yaml(Path(rules_path)).get("hypothesis_rules", {})

    async def validate_config(
        self,
        config_path: Optional[str] = None,
        overrides: Optional[Dict[str, Any]] = None,
        parameter: Optional[Pair] = None,
        preset: Optional[Dict[str, Any]] = None,
    ) -> RunConfig:
        """Load, merge and validate

        Layers from bottom to top: defaults, preset, run file, CLI overrides. The
        parameter goes to lambda or mu by the resolved family.
        """
        user: Dict[str, Any] = {}
        if config_path is not None:
            logger.info(f"Loading run configuration: {config_path}")
            user = self._load_json(Path(config_path))
            self._check_schema(user, str(config_path))
        return self.resolve(user, overrides or {}, parameter, preset)

    def resolve(
        self,
        user: Dict[str, Any],
        overrides: Dict[str, Any],
        parameter: Optional[Pair] = None,
        preset: Optional[Dict[str, Any]] = None,
    ) -> RunConfig:
        base = copy.deepcopy(self.defaults)
        env_directory = os.getenv(OUTPUT_DIR_ENV)
        if env_directory:
            base.setdefault("output", {})["directory"] = env_directory

        merged = deep_merge(deep_merge(deep_merge(base, preset or {}), user), overrides)
        if parameter is not None:
            family = merged.get("system", {}).get("family")
            key = "mu" if family == "mobius" else "lambda"
            merged.setdefault("system", {})[key] = [float(parameter[0]), float(parameter[1])]

        self._check_schema(merged, "resolved configuration")
        try:
            config = RunConfig.model_validate(merged)
        except ModelValidationError as e:
            logger.error(f"Error validating run configuration: {str(e)}")
            raise ConfigError(f"Invalid run configuration: {e}") from e
        logger.debug(f"Resolved configuration hash {config.config_hash()[:12]}")
        return config

    def required_flags(self, command: str, family: str) -> List[str]:
        return list((self.hypothesis_rules.get(command) or {}).get(family, []))

    def enforce_hypotheses(self, command: str, report: HypothesisReport, force: bool = False) -> List[str]:
        """Names of failed flags; raises HypothesisViolation unless forced"""
        failed = [flag for flag in self.required_flags(command, report.family) if not getattr(report, flag)]
        if failed and not force:
            raise HypothesisViolation(
                f"{command} on the {report.family} family needs {', '.join(failed)}; rerun with --force",
                report.model_dump(mode="json"),
            )
        for flag in failed:
            logger.warning(f"Proceeding with {flag} false (--force)")
        return failed

    def _check_schema(self, data: Dict[str, Any], source: str) -> None:
        try:
            validate(instance=data, schema=self.schema)
        except ValidationError as e:
            path = "/".join(str(p) for p in e.absolute_path) or "<root>"
            logger.error(f"Error validating {source} at {path}: {e.message}")
            raise ConfigError(f"{source}: {path}: {e.message}") from e

    @staticmethod
    def _load_json(path: Path) -> Dict[str, Any]:
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError as e:
            raise ConfigError(f"Configuration file not found: {path}") from e
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Cannot read {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must contain a JSON object")
        return data

    @staticmethod
    def _load_yaml(path: Path) -> Dict[str, Any]:
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
        except FileNotFoundError as e:
            raise ConfigError(f"Configuration file not found: {path}") from e
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Cannot read {path}: {e}") from e
        return data
