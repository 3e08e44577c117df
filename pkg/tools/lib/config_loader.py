#!/usr/bin/env python3
"""
Configuration Loader for DRE-MARL runs

This module loads a JSON run configuration, merges command-line overrides on
top of it and validates the result with the RunConfig model.

An empty (or whitespace-only) file stands for ``{}``, so every field takes its
default. Keys starting with ``_`` (documentation comments) are ignored.
"""

import json
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from pydantic import ValidationError

from tools.lib.models.config_models import RunConfig


class ConfigurationError(Exception):
    """Configuration loading or validation error"""

    pass


def _strip_comments(data: Any) -> Any:
    if isinstance(data, dict):
        return {k: _strip_comments(v) for k, v in data.items() if not str(k).startswith("_")}
    return data


def _deep_merge(base: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def format_validation_error(error: ValidationError) -> str:
    """One bullet per failing field, e.g. ``  • hyper -> gamma: ...``"""
    lines = []
    for item in error.errors():
        field_path = " -> ".join(str(loc) for loc in item["loc"]) or "config"
        lines.append(f"  • {field_path}: {item['msg']}")
    return "Configuration validation failed:\n" + "\n".join(lines)


class ConfigLoader:
    """
    Configuration loader and validator for training runs.

    Uses Pydantic models for type-safe validation with comprehensive error messages.
    """

    def __init__(self, config_file: Optional[str] = None):
        """
        Initialize configuration loader

        Args:
            config_file (str, optional): Path to a JSON configuration file;
                None means defaults plus overrides only
        """
        self.config_file = config_file
        self.raw: Dict[str, Any] = {}
        self.config: Optional[RunConfig] = None

    def read_file(self) -> Dict[str, Any]:
        """
        Read the configuration file into a dictionary.

        Raises:
            ConfigurationError: If the file is missing or not a JSON object
        """
        if self.config_file is None:
            return {}
        path = Path(self.config_file)
        if not path.exists():
            raise ConfigurationError(
                f"Configuration file not found: {self.config_file}\n"
                f"Copy config.template.json to {self.config_file} and adjust it"
            )
        text = path.read_text(encoding="utf-8")
        if not text.strip():
            return {}
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid JSON in configuration file: {e}") from e
        if not isinstance(data, dict):
            raise ConfigurationError("Configuration file must contain a JSON object")
        return _strip_comments(data)

    def load_config(self, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
        """
        Load, merge and validate the configuration.

        Args:
            overrides: Values that win over the file (None entries are skipped)

        Returns:
            RunConfig: Validated configuration

        Raises:
            ConfigurationError: If loading or validation fails
        """
        self.raw = _deep_merge(self.read_file(), overrides or {})
        try:
            self.config = RunConfig.model_validate(self.raw)
        except ValidationError as e:
            raise ConfigurationError(format_validation_error(e)) from e
        return self.config

    def print_config_summary(self) -> None:
        """Print a summary of the loaded configuration"""
        if self.config is None:
            print("❌ Configuration not loaded")
            return
        c, h = self.config, self.config.hyper
        print("\n📋 Run configuration:")
        print(f"   Scenario: {c.scenario}-{c.agents}  reward: {c.reward_setting} ({c.reward_signal})")
        print(f"   Estimator: {c.estimator}  aggregation: {c.aggregation}  mode: {c.reward_mode}")
        print(f"   Episodes: {c.episodes}  seed: {c.seed}")
        print(f"   lr={h.lr} gamma={h.gamma} tau={h.tau} batch={h.batch_size} eta={h.entropy_scale}")


def parse_config(
    config_file: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """
    Convenience function: file plus flag overrides -> validated RunConfig

    Raises:
        ConfigurationError: If loading fails
    """
    return ConfigLoader(config_file).load_config(overrides)


def canonical_json(config: RunConfig) -> str:
    """Sorted-key JSON form of a configuration"""
    return json.dumps(config.model_dump(mode="json"), sort_keys=True)


__all__ = [
    "ConfigurationError",
    "ConfigLoader",
    "parse_config",
    "canonical_json",
    "format_validation_error",
]
