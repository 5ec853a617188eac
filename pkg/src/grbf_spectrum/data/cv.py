"""Repeated k-fold cross-validation and hyperparameter grid search."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.model_selection import KFold, StratifiedKFold

from ..config.grid import GridSpec
from ..config.train_config import TrainConfig
from ..errors import GridSearchError
from ..training.trainer import evaluate, fit_dataset
from .dataset import Dataset
from .metrics import higher_is_better, metric_name

logger = logging.getLogger(__name__)

DEFAULT_N_FOLDS = 5
DEFAULT_N_SEEDS = 20

RESULT_COLUMNS = [
    "lambda_w",
    "lambda_u",
    "lambda_c",
    "M",
    "lr",
    "mode",
    "seed",
    "fold",
    "train_metric",
    "test_metric",
]
CONFIG_COLUMNS = ["M", "lr", "mode", "lambda_c", "lambda_w", "lambda_u"]

Split = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True)
class CvPlan:
    """Fold count and the seeds each repetition shuffles with."""

    n_folds: int = DEFAULT_N_FOLDS
    n_seeds: int = DEFAULT_N_SEEDS
    seeds: Tuple[int, ...] = ()
    stratify: bool = True

    def __post_init__(self):
        if isinstance(self.n_folds, bool) or not isinstance(self.n_folds, int) or self.n_folds < 2:
            raise ValueError("Field 'n_folds' must be an integer >= 2")
        seeds = tuple(int(s) for s in self.seeds)
        if not seeds:
            if isinstance(self.n_seeds, bool) or not isinstance(self.n_seeds, int) or self.n_seeds < 1:
                raise ValueError("Field 'n_seeds' must be a positive integer")
            seeds = tuple(range(self.n_seeds))
        if any(s < 0 for s in seeds):
            raise ValueError("Seeds must be unsigned integers")
        object.__setattr__(self, "seeds", seeds)
        object.__setattr__(self, "n_seeds", len(seeds))


def kfold_split(
    n: int,
    plan: CvPlan,
    stratify_labels: Optional[Sequence[int]] = None,
    seed: Optional[int] = None,
) -> List[Split]:
    """Shuffled ``(train, test)`` index pairs whose test parts partition ``0..n-1``.

    ``seed`` defaults to the plan's first seed.

    Raises:
        ValueError: if ``n < n_folds`` or, when stratifying, a class has
            fewer members than there are folds
    """
    if n < plan.n_folds:
        raise ValueError(f"Cannot split {n} rows into {plan.n_folds} folds")
    seed = plan.seeds[0] if seed is None else seed
    indices = np.arange(n)

    if stratify_labels is None:
        splitter = KFold(n_splits=plan.n_folds, shuffle=True, random_state=seed)
        return [(train, test) for train, test in splitter.split(indices)]

    labels = np.asarray(stratify_labels).reshape(-1)
    if labels.size != n:
        raise ValueError(f"{labels.size} labels for {n} rows")
    classes, counts = np.unique(labels, return_counts=True)
    too_small = classes[counts < plan.n_folds]
    if too_small.size:
        raise ValueError(
            f"Class(es) {', '.join(str(c) for c in too_small)} have fewer than "
            f"{plan.n_folds} members; cannot stratify"
        )
    splitter = StratifiedKFold(n_splits=plan.n_folds, shuffle=True, random_state=seed)
    return [(train, test) for train, test in splitter.split(indices, labels)]


def _config_columns(cfg: TrainConfig) -> Dict[str, Any]:
    return {
        "M": cfg.n_centers,
        "lr": cfg.learning_rate,
        "mode": cfg.center_mode,
        "lambda_c": cfg.reg.lambda_c,
        "lambda_w": cfg.reg.lambda_w,
        "lambda_u": cfg.reg.lambda_u,
    }


class _FoldTask(NamedTuple):
    config_index: int
    config: TrainConfig
    seed: int
    fold: int
    train: np.ndarray
    test: np.ndarray


def _run_fold(dataset: Dataset, task: _FoldTask) -> Dict[str, Any]:
    name = metric_name(dataset.task)
    try:
        model, _ = fit_dataset(dataset.subset(task.train), replace(task.config, seed=task.seed))
        test_metric = evaluate(model, dataset.subset(task.test))[name]
    except Exception as e:
        raise GridSearchError(
            f"seed {task.seed}, fold {task.fold}: {e}", task.config_index
        ) from e
    logger.debug(
        "config #%s seed %s fold %s: train %s=%.6g test %s=%.6g",
        task.config_index,
        task.seed,
        task.fold,
        name,
        model.train_metric,
        name,
        test_metric,
    )
    return {
        "config_index": task.config_index,
        **_config_columns(task.config),
        "seed": task.seed,
        "fold": task.fold,
        "train_metric": model.train_metric,
        "test_metric": test_metric,
    }


@dataclass(frozen=True)
class GridSearchResult:
    """Per-fold rows, per-config summary and the lambda_w x lambda_u heat map."""

    rows: pd.DataFrame
    summary: pd.DataFrame
    best_index: int
    metric: str
    heat_map: pd.DataFrame = field(repr=False)

    @property
    def best_config(self) -> Dict[str, Any]:
        return self.summary.loc[self.best_index].to_dict()

    def results_frame(self) -> pd.DataFrame:
        return self.rows[RESULT_COLUMNS + ["config_index"]]


def _std(values: pd.Series) -> float:
    return float(values.std(ddof=0))


def summarize(rows: pd.DataFrame, task: str) -> Tuple[pd.DataFrame, int]:
    """Mean and std of the metrics per config, with the best config flagged."""
    summary = rows.groupby("config_index", sort=True).agg(
        **{column: (column, "first") for column in CONFIG_COLUMNS},
        train_mean=("train_metric", "mean"),
        train_std=("train_metric", _std),
        test_mean=("test_metric", "mean"),
        test_std=("test_metric", _std),
        n_runs=("test_metric", "size"),
    )
    test_means = summary["test_mean"].to_numpy()
    position = int(np.argmax(test_means) if higher_is_better(task) else np.argmin(test_means))
    best_index = int(summary.index[position])
    summary["best"] = summary.index == best_index
    return summary, best_index


def heat_map(summary: pd.DataFrame, task: str) -> pd.DataFrame:
    """Best mean test metric per ``(lambda_w, lambda_u)`` cell over all other settings.

    Rows are ``lambda_w`` values, columns ``lambda_u`` values.
    """
    grouped = summary.groupby(["lambda_w", "lambda_u"])["test_mean"]
    best = grouped.max() if higher_is_better(task) else grouped.min()
    return best.unstack("lambda_u").sort_index().sort_index(axis=1)


def grid_search(
    dataset: Dataset,
    grid: GridSpec,
    plan: CvPlan,
    base: Optional[TrainConfig] = None,
    threads: int = 1,
) -> GridSearchResult:
    """Cross-validate every grid config; rows ordered by (config, seed, fold).

    Raises:
        GridSearchError: wrapping the first failing fold, naming its config
    """
    configs = grid.configs(base or TrainConfig())
    stratify = dataset.y if plan.stratify and dataset.task != "regression" else None
    splits = {
        seed: kfold_split(dataset.n_samples, plan, stratify, seed) for seed in plan.seeds
    }
    tasks = [
        _FoldTask(index, cfg, seed, fold, train, test)
        for index, cfg in enumerate(configs)
        for seed in plan.seeds
        for fold, (train, test) in enumerate(splits[seed])
    ]
    logger.info(
        "Grid search: %s config(s) x %s seed(s) x %s fold(s) on %s thread(s)",
        len(configs),
        plan.n_seeds,
        plan.n_folds,
        threads,
    )

    with ThreadPoolExecutor(max_workers=threads) as executor:
        records = list(executor.map(lambda task: _run_fold(dataset, task), tasks))

    rows = pd.DataFrame.from_records(records)
    summary, best_index = summarize(rows, dataset.task)
    metric = metric_name(dataset.task)
    logger.info(
        "Best config #%s: mean test %s %.6g",
        best_index,
        metric,
        summary.loc[best_index, "test_mean"],
    )
    return GridSearchResult(
        rows=rows,
        summary=summary,
        best_index=best_index,
        metric=metric,
        heat_map=heat_map(summary, dataset.task),
    )
