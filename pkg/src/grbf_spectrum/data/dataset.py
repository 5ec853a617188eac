"""Tabular datasets and their CSV format.

A dataset CSV has a header row, one column per feature and one target
column. Classification targets may use any numeric labels; they are mapped
to ``0..C-1`` in sorted order and the originals kept as ``class_labels``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from ..errors import DataFormatError, DimensionError
from ..kernel import FloatArray
from ..model import TASKS
from ..utils.atomic_write import atomic_write_frame

logger = logging.getLogger(__name__)

DEFAULT_TARGET = "y"
_LINE_RE = re.compile(r"line (\d+)")


def _python_scalar(value: Any) -> Any:
    """Integral floats become ints so labels read back the way they were written."""
    item = value.item() if isinstance(value, np.generic) else value
    if isinstance(item, float) and item.is_integer():
        return int(item)
    return item


@dataclass(frozen=True)
class Dataset:
    """Feature matrix, targets and what is known about the features."""

    X: FloatArray
    y: np.ndarray
    task: str = "regression"
    feature_names: Tuple[str, ...] = ()
    relevant_mask: Optional[np.ndarray] = None
    class_labels: Tuple[Any, ...] = ()
    target_name: str = DEFAULT_TARGET

    def __post_init__(self):
        X = np.array(self.X, dtype=np.float64)
        if X.ndim != 2:
            raise DimensionError(f"X must be an N x D matrix, got shape {X.shape}")
        if self.task not in TASKS:
            raise ValueError(f"Invalid task: '{self.task}'. Must be one of {', '.join(TASKS)}")
        y = np.array(self.y).reshape(-1)
        if y.size != X.shape[0]:
            raise DimensionError(f"X has {X.shape[0]} rows but y has {y.size} entries")

        if self.task == "regression":
            y = y.astype(np.float64)
        else:
            y = y.astype(np.int64)
            class_labels = tuple(self.class_labels) or tuple(
                range(int(y.max()) + 1 if y.size else 0)
            )
            if y.size and (y.min() < 0 or y.max() >= len(class_labels)):
                raise ValueError(f"Class labels must lie in 0..{len(class_labels) - 1}")
            if self.task == "binary" and len(class_labels) > 2:
                raise ValueError(f"Binary task has {len(class_labels)} classes")
            object.__setattr__(self, "class_labels", class_labels)

        names = tuple(self.feature_names) or tuple(f"x{j + 1}" for j in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise DimensionError(f"{len(names)} feature names for {X.shape[1]} features")
        if self.relevant_mask is not None:
            mask = np.array(self.relevant_mask, dtype=bool).reshape(-1)
            if mask.size != X.shape[1]:
                raise DimensionError(
                    f"Relevance mask has {mask.size} entries for {X.shape[1]} features"
                )
            object.__setattr__(self, "relevant_mask", mask)

        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_labels)

    def subset(self, indices: ArrayLike) -> "Dataset":
        rows = np.asarray(indices, dtype=np.int64)
        return Dataset(
            X=self.X[rows],
            y=self.y[rows],
            task=self.task,
            feature_names=self.feature_names,
            relevant_mask=self.relevant_mask,
            class_labels=self.class_labels,
            target_name=self.target_name,
        )

    def target_values(self) -> np.ndarray:
        """Targets in their original units or labels."""
        if self.task == "regression":
            return self.y
        return np.asarray(self.class_labels, dtype=object)[self.y]

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.X, columns=list(self.feature_names))
        frame[self.target_name] = list(self.target_values())
        return frame


def _check_header(columns: Sequence[str]) -> None:
    def is_number(text: str) -> bool:
        try:
            float(text)
        except ValueError:
            return False
        return True

    if all(is_number(str(name)) for name in columns):
        raise DataFormatError("missing header row (all column names are numeric)", line=1)


def _to_numeric(raw: pd.DataFrame) -> FloatArray:
    """Parse every cell as a finite float, reporting the first offending cell."""
    short = raw.isna()
    if short.to_numpy().any():
        row = int(np.argmax(short.to_numpy().any(axis=1)))
        raise DataFormatError(
            f"ragged row: expected {raw.shape[1]} fields", line=row + 2
        )
    parsed = raw.apply(pd.to_numeric, errors="coerce")
    values = parsed.to_numpy(dtype=np.float64)
    bad = ~np.isfinite(values)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        column = str(raw.columns[col])
        raise DataFormatError(
            f"non-numeric or non-finite value {raw.iat[row, col]!r}",
            line=int(row) + 2,
            column=column,
        )
    return values


def _read_table(path: str | Path) -> Tuple[Tuple[str, ...], FloatArray]:
    """Column names and the parsed numeric cells of a headed CSV."""
    csv_file = Path(path).expanduser()
    if not csv_file.exists():
        raise FileNotFoundError(f"Data file not found: {path}")

    try:
        raw = pd.read_csv(csv_file, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DataFormatError(f"file is empty: {csv_file}")
    except pd.errors.ParserError as e:
        match = _LINE_RE.search(str(e))
        raise DataFormatError(
            f"ragged row: {e}", line=int(match.group(1)) if match else None
        )

    _check_header(raw.columns)
    if raw.empty:
        raise DataFormatError(f"file has no data rows: {csv_file}")
    values = _to_numeric(raw)
    logger.debug("Read %s rows x %s columns from %s", values.shape[0], values.shape[1], csv_file)
    return tuple(str(c) for c in raw.columns), values


def _split_target(
    columns: Tuple[str, ...], values: FloatArray, target: str
) -> Tuple[FloatArray, Tuple[str, ...], FloatArray]:
    target_index = columns.index(target)
    X = np.delete(values, target_index, axis=1)
    if X.shape[1] == 0:
        raise DataFormatError("file has no feature columns", line=1)
    feature_names = columns[:target_index] + columns[target_index + 1 :]
    return X, feature_names, values[:, target_index]


def load_csv(
    path: str | Path, target: str = DEFAULT_TARGET, task: str = "regression"
) -> Dataset:
    """Read a headed numeric CSV; line numbers in errors count the header as 1.

    Raises:
        FileNotFoundError: if ``path`` does not exist
        DataFormatError: for an empty file, a missing header or target column,
            ragged rows, or a non-numeric or non-finite cell
    """
    if task not in TASKS:
        raise ValueError(f"Invalid task: '{task}'. Must be one of {', '.join(TASKS)}")
    columns, values = _read_table(path)
    if target not in columns:
        raise DataFormatError(f"target column '{target}' not found", line=1)
    X, feature_names, y = _split_target(columns, values, target)

    class_labels: Tuple[Any, ...] = ()
    if task != "regression":
        classes, y = np.unique(y, return_inverse=True)
        class_labels = tuple(_python_scalar(c) for c in classes)
        if task == "binary" and len(classes) > 2:
            raise DataFormatError(
                f"binary task but target column '{target}' has {len(classes)} classes"
            )

    return Dataset(
        X=X,
        y=y,
        task=task,
        feature_names=feature_names,
        class_labels=class_labels,
        target_name=target,
    )


def load_features(
    path: str | Path, target: str = DEFAULT_TARGET
) -> Tuple[FloatArray, Tuple[str, ...], Optional[FloatArray]]:
    """Feature matrix, feature names and raw target values (``None`` when absent)."""
    columns, values = _read_table(path)
    if target not in columns:
        return values, columns, None
    return _split_target(columns, values, target)


def save_csv(dataset: Dataset, path: str | Path) -> Path:
    """Write features then target with 17 significant digits."""
    return atomic_write_frame(dataset.to_frame(), path)
