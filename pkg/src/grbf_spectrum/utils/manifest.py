"""Run manifests written next to every command's outputs."""

import platform
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

from .. import __version__
from .json_serializer import dump_json

MANIFEST_SUFFIX = ".manifest.json"


def manifest_path_for(output: str | Path) -> Path:
    """``results.csv`` -> ``results.csv.manifest.json``"""
    target = Path(output)
    return target.with_name(target.name + MANIFEST_SUFFIX)


@dataclass
class RunManifest:
    """Everything needed to re-run a command and check its outputs."""

    command: str
    argv: List[str]
    config: Dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    metrics: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0
    tool_version: str = __version__
    python_version: str = field(default_factory=platform.python_version)
    created_at: str = field(
        default_factory=lambda: datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
    )

    @classmethod
    def start(cls, command: str, argv: List[str] | None = None, **kwargs: Any) -> "RunManifest":
        return cls(command=command, argv=list(sys.argv if argv is None else argv), **kwargs)

    def write(self, primary_output: str | Path) -> Path:
        """Write the manifest beside ``primary_output`` and return its path."""
        return dump_json(asdict(self), manifest_path_for(primary_output))
