"""Scenario and experiment files: strict YAML loading.

Files carry a ``schema_version`` and mirror the config dataclass field
names. Unknown keys are hard errors so a typo in a research config fails
loudly instead of silently running defaults.

Scenario file::

    schema_version: 1
    scenario:
      population: 80
      bad_fraction: 0.25
      buffer: {kind: dynamic}
      reward: {benefits_per_star: 5}

Experiment file::

    schema_version: 1
    experiment:
      kind: population_sweep
      population_values: [80, 90, 100, 110]
      strategies:
        - {kind: static, size: 0}
        - {kind: dynamic}
      base: {bad_fraction: 0.25, runs: 5}
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

import yaml

from .buffers import BufferPolicyConfig
from .experiments import DEFAULT_STRATEGIES, ExperimentSpec
from .reward import RewardConfig
from .simulator import ScenarioConfig

SCHEMA_VERSION = 1

_TUPLE_FIELDS = {
    "park_duration_range",
    "off_system_duration_range",
    "population_range",
    "population_values",
    "bad_fraction_values",
}


class ConfigError(ValueError):
    """A config file is malformed or contradicts itself."""


def _check_keys(mapping: dict, allowed: set[str], context: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(f"unknown {context} keys: {sorted(unknown)}")


def _coerce(key: str, value):
    if key in _TUPLE_FIELDS and isinstance(value, list):
        return tuple(value)
    if key == "area_locations" and isinstance(value, list):
        return tuple(tuple(p) for p in value)
    if key == "area_weights" and isinstance(value, list):
        return tuple(float(w) for w in value)
    return value


def buffer_from_dict(data: dict) -> BufferPolicyConfig:
    allowed = {f.name for f in BufferPolicyConfig.__dataclass_fields__.values()}
    _check_keys(data, allowed, "buffer")
    try:
        return BufferPolicyConfig(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid buffer config: {exc}") from exc


def reward_from_dict(data: dict) -> RewardConfig:
    allowed = {f.name for f in RewardConfig.__dataclass_fields__.values()}
    _check_keys(data, allowed, "reward")
    try:
        return RewardConfig(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid reward config: {exc}") from exc


def scenario_from_dict(data: dict) -> ScenarioConfig:
    allowed = {f.name for f in ScenarioConfig.__dataclass_fields__.values()}
    _check_keys(data, allowed, "scenario")
    fields = {}
    for key, value in data.items():
        if key == "buffer":
            fields[key] = buffer_from_dict(value)
        elif key == "reward":
            fields[key] = reward_from_dict(value)
        else:
            fields[key] = _coerce(key, value)
    try:
        return ScenarioConfig(**fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid scenario config: {exc}") from exc


def experiment_from_dict(data: dict) -> ExperimentSpec:
    allowed = {f.name for f in ExperimentSpec.__dataclass_fields__.values()}
    _check_keys(data, allowed, "experiment")
    fields = {}
    for key, value in data.items():
        if key == "base":
            fields[key] = scenario_from_dict(value)
        elif key == "strategies":
            fields[key] = tuple(buffer_from_dict(s) for s in value)
        else:
            fields[key] = _coerce(key, value)
    fields.setdefault("strategies", DEFAULT_STRATEGIES)
    try:
        return ExperimentSpec(**fields)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid experiment spec: {exc}") from exc


def _load_document(path: Union[str, Path]) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    version = doc.get("schema_version")
    if version is None:
        raise ConfigError(f"{path}: missing schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"{path}: schema_version {version} not supported (expected {SCHEMA_VERSION})"
        )
    return doc


def load_scenario_file(path: Union[str, Path]) -> ScenarioConfig:
    doc = _load_document(path)
    _check_keys(doc, {"schema_version", "scenario"}, "top-level")
    if "scenario" not in doc:
        raise ConfigError(f"{path}: missing 'scenario' section")
    return scenario_from_dict(doc["scenario"] or {})


def load_experiment_file(path: Union[str, Path]) -> ExperimentSpec:
    doc = _load_document(path)
    _check_keys(doc, {"schema_version", "experiment"}, "top-level")
    if "experiment" not in doc:
        raise ConfigError(f"{path}: missing 'experiment' section")
    return experiment_from_dict(doc["experiment"] or {})
