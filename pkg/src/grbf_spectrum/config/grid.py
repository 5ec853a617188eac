"""Hyperparameter grids for cross-validated search."""

import itertools
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, List, Sequence, Tuple

from .train_config import (
    DEFAULT_LEARNING_RATE,
    DEFAULT_N_CENTERS,
    UNSUPERVISED,
    Regularizers,
    TrainConfig,
    normalize_center_mode,
)

REGULARIZER_GRID = (0.0, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0)
LEARNING_RATE_GRID = (1e-3, 1e-2)
REGRESSION_CENTERS_GRID = (8, 32, 128)
CLASSIFICATION_CENTERS_GRID = (2, 4, 8, 16, 32)


def _as_tuple(value: Any, field_name: str) -> Tuple[Any, ...]:
    if isinstance(value, (str, bytes)) or not isinstance(value, Sequence):
        value = [value]
    items = tuple(value)
    if not items:
        raise ValueError(f"Grid '{field_name}' must contain at least one value")
    return items


@dataclass(frozen=True)
class GridSpec:
    """Axes of a search grid; every combination is one training config."""

    n_centers: Tuple[int, ...] = (DEFAULT_N_CENTERS,)
    center_mode: Tuple[str, ...] = (UNSUPERVISED,)
    learning_rate: Tuple[float, ...] = (DEFAULT_LEARNING_RATE,)
    lambda_c: Tuple[float, ...] = (0.0,)
    lambda_w: Tuple[float, ...] = (0.0,)
    lambda_u: Tuple[float, ...] = (0.0,)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, _as_tuple(getattr(self, f.name), f.name))
        object.__setattr__(
            self,
            "center_mode",
            tuple(normalize_center_mode(mode) for mode in self.center_mode),
        )

    @property
    def size(self) -> int:
        total = 1
        for f in fields(self):
            total *= len(getattr(self, f.name))
        return total

    def configs(self, base: TrainConfig) -> List[TrainConfig]:
        """Expand the grid into configs; ``lambda_u`` varies fastest."""
        expanded = []
        for mode, n_centers, lr, lambda_c, lambda_w, lambda_u in itertools.product(
            self.center_mode,
            self.n_centers,
            self.learning_rate,
            self.lambda_c,
            self.lambda_w,
            self.lambda_u,
        ):
            expanded.append(
                replace(
                    base,
                    center_mode=mode,
                    n_centers=n_centers,
                    learning_rate=lr,
                    reg=Regularizers(
                        lambda_w=lambda_w, lambda_u=lambda_u, lambda_c=lambda_c
                    ),
                )
            )
        return expanded

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridSpec":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"Unknown grid option(s): {', '.join(unknown)}")
        return cls(**data)


def default_grid(task: str) -> GridSpec:
    """The full published search grid for a task."""
    centers = (
        REGRESSION_CENTERS_GRID if task == "regression" else CLASSIFICATION_CENTERS_GRID
    )
    return GridSpec(
        n_centers=centers,
        learning_rate=LEARNING_RATE_GRID,
        lambda_w=REGULARIZER_GRID,
        lambda_u=REGULARIZER_GRID,
    )
