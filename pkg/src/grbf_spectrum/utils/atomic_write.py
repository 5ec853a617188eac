"""Atomic file output: write to a sibling temp file, then rename over the target."""

import os
import tempfile
from contextlib import suppress
from pathlib import Path

import pandas as pd

# 17 significant digits round-trip every IEEE double
CSV_FLOAT_FORMAT = "%.17g"


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write ``text`` to ``path`` so readers never observe a partial file."""
    target = Path(path).expanduser()
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(
        prefix=f".{target.name}.", suffix=".tmp", dir=target.parent
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp_name, target)
    except BaseException:
        with suppress(FileNotFoundError):
            os.unlink(tmp_name)
        raise
    return target


def atomic_write_frame(frame: pd.DataFrame, path: str | Path) -> Path:
    """Write a DataFrame as CSV (no index) with full float precision."""
    text = frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return atomic_write_text(path, text)
