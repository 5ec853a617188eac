"""YAML configuration loader for training defaults and search grids."""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict

import yaml

from .grid import GridSpec
from .train_config import TrainConfig

# YAML 1.1 reads "1e-3" as a string; accept plain scientific notation too.
_NUMBER_RE = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")
TOP_LEVEL_KEYS = ("train", "grid")


def _coerce_numbers(value: Any) -> Any:
    if isinstance(value, str) and _NUMBER_RE.match(value.strip()):
        return float(value)
    if isinstance(value, list):
        return [_coerce_numbers(item) for item in value]
    if isinstance(value, dict):
        return {key: _coerce_numbers(item) for key, item in value.items()}
    return value


@dataclass(frozen=True)
class ConfigDocument:
    """Validated contents of a configuration file."""

    train: Dict[str, Any] = field(default_factory=dict)
    grid: Dict[str, Any] = field(default_factory=dict)

    def train_config(self, **overrides: Any) -> TrainConfig:
        values = dict(self.train)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return TrainConfig.from_dict(values)

    def grid_spec(self, **overrides: Any) -> GridSpec:
        values = dict(self.grid)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return GridSpec.from_dict(values)


def load_config_from_text(
    yaml_text: str, source: str | Path = "<memory>"
) -> ConfigDocument:
    """
    Load and validate a configuration document from YAML text.

    Args:
        yaml_text: Raw YAML document content
        source: Source label used in validation errors
    """
    raw = yaml.safe_load(yaml_text)
    if raw is None:
        return ConfigDocument()
    if not isinstance(raw, dict):
        raise ValueError(f"Configuration file must contain a mapping: {source}")

    errors: list[str] = []
    for key in sorted(set(raw) - set(TOP_LEVEL_KEYS)):
        errors.append(f"Unknown section '{key}'")

    sections: Dict[str, Dict[str, Any]] = {}
    for key in TOP_LEVEL_KEYS:
        section = raw.get(key) or {}
        if not isinstance(section, dict):
            errors.append(f"Section '{key}' must be a mapping")
            continue
        sections[key] = _coerce_numbers(section)

    if not errors:
        # Validate eagerly so a bad file fails before any work starts
        try:
            TrainConfig.from_dict(sections["train"])
        except (TypeError, ValueError) as e:
            errors.append(f"Section 'train': {e}")
        try:
            GridSpec.from_dict(sections["grid"])
        except (TypeError, ValueError) as e:
            errors.append(f"Section 'grid': {e}")

    if errors:
        error_msg = f"Configuration validation failed ({source}):\n  - " + "\n  - ".join(
            errors
        )
        raise ValueError(error_msg)

    return ConfigDocument(train=sections["train"], grid=sections["grid"])


def load_config(yaml_path: str | Path) -> ConfigDocument:
    """
    Load and validate a configuration file.

    Raises:
        FileNotFoundError: If the YAML file doesn't exist
        ValueError: If the configuration is invalid (lists all problems)
    """
    yaml_file = Path(yaml_path).expanduser()
    if not yaml_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {yaml_path}")

    with open(yaml_file, encoding="utf-8") as f:
        yaml_text = f.read()

    return load_config_from_text(yaml_text, yaml_file)
