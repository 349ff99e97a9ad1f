"""YAML experiment configuration loaded into frozen dataclasses."""

import dataclasses
import types
import typing
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

import yaml

from rlihf_bench.agent.sac import SACConfig
from rlihf_bench.errors import ConfigError
from rlihf_bench.fusion.pipeline import PipelineConfig
from rlihf_bench.models.records import Condition
from rlihf_bench.models.scenario import Scenario

DEFAULT_CONFIG = "default.yaml"
RLIHF_ENV_REWARDS = ("sparse", "dense")


@dataclass(frozen=True)
class ExperimentConfig:
    """Run protocol: conditions, budget, evaluation cadence and seeds."""
    conditions: tuple[Condition, ...] = (Condition.SPARSE, Condition.DENSE, Condition.RLIHF)
    w_hf: float = 0.1
    total_steps: int = 60_000
    episode_len: int = 1000
    eval_interval: int = 2000
    eval_rollouts: int = 5
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    master_seed: int = 0
    sweep_weights: tuple[float, ...] = (0.1, 0.4, 0.7)
    rlihf_env_reward: str = "sparse"
    parallel: int = 1
    log_rewards: bool = False

    def __post_init__(self):
        if not self.conditions:
            raise ConfigError("experiment.conditions must not be empty")
        if self.w_hf < 0 or any(w < 0 for w in self.sweep_weights):
            raise ConfigError("feedback weights must be >= 0")
        if self.total_steps < 1 or self.episode_len < 1:
            raise ConfigError("experiment.total_steps and experiment.episode_len must be >= 1")
        if self.eval_interval < 1:
            raise ConfigError("experiment.eval_interval must be >= 1")
        if self.eval_rollouts < 1:
            raise ConfigError("experiment.eval_rollouts must be >= 1")
        if not self.seeds:
            raise ConfigError("experiment.seeds must not be empty")
        if self.rlihf_env_reward not in RLIHF_ENV_REWARDS:
            raise ConfigError(f"experiment.rlihf_env_reward must be one of {RLIHF_ENV_REWARDS}")
        if self.parallel < 1:
            raise ConfigError("experiment.parallel must be >= 1")


@dataclass(frozen=True)
class BenchConfig:
    """Complete resolved configuration."""
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)
    scenario: Scenario = field(default_factory=Scenario)
    sac: SACConfig = field(default_factory=SACConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)

    def to_dict(self) -> dict[str, Any]:
        return to_plain(self)

    @property
    def run_scenario(self) -> Scenario:
        """Scenario with its step limit tied to the episode length."""
        return replace(self.scenario, max_steps=self.experiment.episode_len)


def to_plain(obj: Any) -> Any:
    """Dataclasses, enums and tuples to YAML/JSON-safe values."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (tuple, list)):
        return [to_plain(v) for v in obj]
    return obj


def _convert(hint: Any, value: Any, path: str) -> Any:
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)

    if origin in (Union, types.UnionType):
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        return _convert(inner[0], value, path)
    if origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"{path}: expected a list, got {value!r}")
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_convert(args[0], v, f"{path}[{i}]") for i, v in enumerate(value))
        if len(args) != len(value):
            raise ConfigError(f"{path}: expected {len(args)} values, got {len(value)}")
        return tuple(_convert(a, v, f"{path}[{i}]") for i, (a, v) in enumerate(zip(args, value)))
    if dataclasses.is_dataclass(hint):
        return build_dataclass(hint, value, path)
    if isinstance(hint, type) and issubclass(hint, Enum):
        try:
            return hint(value)
        except ValueError:
            choices = ", ".join(str(m.value) for m in hint)
            raise ConfigError(f"{path}: {value!r} is not one of {choices}") from None
    if hint is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{path}: expected true/false, got {value!r}")
        return value
    if hint in (int, float):
        # YAML 1.1 reads exponent floats without a dot (1e-3) as strings
        if hint is float and isinstance(value, str):
            try:
                return float(value)
            except ValueError:
                raise ConfigError(f"{path}: expected a number, got {value!r}") from None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        if hint is int and float(value) != int(value):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return hint(value)
    if hint is str:
        if not isinstance(value, str):
            raise ConfigError(f"{path}: expected a string, got {value!r}")
        return value
    return value


def build_dataclass(cls: type, data: Any, path: str = "") -> Any:
    """Instantiate cls from a mapping, rejecting unknown keys by dotted path."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path or cls.__name__}: expected a mapping, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls) if f.init}
    for key in data:
        if key not in names:
            raise ConfigError(f"unknown key {'.'.join(filter(None, [path, str(key)]))}")
    kwargs = {
        key: _convert(hints[key], value, ".".join(filter(None, [path, key])))
        for key, value in data.items()
    }
    return cls(**kwargs)


def config_from_dict(data: dict[str, Any]) -> BenchConfig:
    """Build a BenchConfig, unwrapping an experiment manifest's config object."""
    if isinstance(data, dict) and "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    return build_dataclass(BenchConfig, data)


def default_config_text() -> str:
    return resources.files("rlihf_bench.data").joinpath(DEFAULT_CONFIG).read_text(encoding="utf-8")


def load_config(path: Optional[Path | str] = None) -> BenchConfig:
    """Load a YAML config or JSON manifest; the packaged defaults when path is None.

    Raises:
        ConfigError: On unreadable files, bad syntax, unknown keys or invalid values
    """
    if path is None:
        text, source = default_config_text(), DEFAULT_CONFIG
    else:
        path = Path(path)
        try:
            text, source = path.read_text(encoding="utf-8"), str(path)
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"{source}: {e}") from e
    return config_from_dict(data)


def apply_overrides(
    config: BenchConfig,
    seed: Optional[int] = None,
    conditions: Optional[list[Condition]] = None,
    w_hf: Optional[float] = None,
    steps: Optional[int] = None,
    parallel: Optional[int] = None,
    log_rewards: Optional[bool] = None,
    sweep_weights: Optional[list[float]] = None,
) -> BenchConfig:
    """CLI flag overrides on top of a loaded config."""
    changes: dict[str, Any] = {}
    if seed is not None:
        changes["master_seed"] = seed
    if conditions:
        changes["conditions"] = tuple(conditions)
    if w_hf is not None:
        changes["w_hf"] = w_hf
    if steps is not None:
        changes["total_steps"] = steps
    if parallel is not None:
        changes["parallel"] = parallel
    if log_rewards is not None:
        changes["log_rewards"] = log_rewards
    if sweep_weights:
        changes["sweep_weights"] = tuple(sweep_weights)
    if not changes:
        return config
    return replace(config, experiment=replace(config.experiment, **changes))
