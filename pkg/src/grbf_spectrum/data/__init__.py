"""
Datasets, synthetic problems and scoring

Cross-validation lives in :mod:`grbf_spectrum.data.cv`, which depends on the
training package and is imported from there directly.
"""

from .dataset import Dataset, load_csv, load_features, save_csv
from .metrics import metric_name, metrics
from .synthetic import PROBLEMS, gen_p1, gen_p2, gen_p3, gen_toys, generate

__all__ = [
    "PROBLEMS",
    "Dataset",
    "gen_p1",
    "gen_p2",
    "gen_p3",
    "gen_toys",
    "generate",
    "load_csv",
    "load_features",
    "metric_name",
    "metrics",
    "save_csv",
]
