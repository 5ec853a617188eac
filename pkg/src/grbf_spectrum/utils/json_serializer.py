"""
JSON serialization for model documents and run manifests.
Converts numpy arrays and scalars to plain JSON types.
"""

import json
from pathlib import Path
from typing import Any

import numpy as np

from .atomic_write import atomic_write_text


class NumpyJSONEncoder(json.JSONEncoder):
    """JSON encoder that understands numpy values and paths."""

    def default(self, o: Any) -> Any:
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, Path):
            return str(o)
        if isinstance(o, set):
            return sorted(o)

        # For any other non-serializable type, convert to string
        return str(o)


def serialize(document: Any) -> str:
    """
    Serialize a document to indented JSON.

    Python floats are written with their shortest round-trip representation,
    so a load after save reproduces every value bit-for-bit.
    """
    return json.dumps(
        document, cls=NumpyJSONEncoder, ensure_ascii=False, indent=2, allow_nan=False
    )


def dump_json(document: Any, path: str | Path) -> Path:
    return atomic_write_text(path, serialize(document) + "\n")
