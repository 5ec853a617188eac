from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

APP_NAME = "grbf-spectrum"
ENV_PREFIX = "GRBF_SPECTRUM"


@dataclass(frozen=True)
class RuntimePaths:
    config_dir: Path
    threads: int

    @property
    def defaults_file(self) -> Path:
        return self.config_dir / "defaults.yaml"

    def render(self) -> str:
        return "\n".join(
            [
                f"config_dir={self.config_dir}",
                f"defaults_file={self.defaults_file}",
                f"threads={self.threads}",
            ]
        )


def _expand_path(value: str | Path) -> Path:
    return Path(value).expanduser()


def _default_config_dir() -> Path:
    return Path.home() / ".config" / APP_NAME


def resolve_thread_count(threads: int | str | None = None) -> int:
    """Worker count for parallel commands: explicit value, env override, else 1."""
    raw = threads if threads is not None else os.getenv(f"{ENV_PREFIX}_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        value = int(raw)
    except (TypeError, ValueError):
        raise ValueError(f"{ENV_PREFIX}_THREADS must be a positive integer, got: {raw!r}")
    if value < 1:
        raise ValueError(f"{ENV_PREFIX}_THREADS must be a positive integer, got: {value}")
    return value


def resolve_runtime_paths(
    config_dir: str | Path | None = None,
    threads: int | str | None = None,
) -> RuntimePaths:
    resolved_config_dir = _expand_path(
        config_dir or os.getenv(f"{ENV_PREFIX}_CONFIG_DIR") or _default_config_dir()
    )
    return RuntimePaths(
        config_dir=resolved_config_dir,
        threads=resolve_thread_count(threads),
    )
