"""
Shared test fixtures for grbf-spectrum tests
Random model instances, small datasets and fast training configs
"""

from pathlib import Path

import numpy as np
import pytest

from grbf_spectrum.config import Regularizers, TrainConfig
from grbf_spectrum.data.dataset import Dataset
from grbf_spectrum.tools.gradcheck import build_random_instance

PROJECT_ROOT = Path(__file__).resolve().parents[1]


def random_upper_triangular(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Upper-triangular matrix with a positive diagonal (so ``P`` is definite)."""
    U = np.triu(rng.uniform(-1.0, 1.0, size=(dim, dim)))
    U[np.diag_indices(dim)] = rng.uniform(0.5, 1.5, size=dim)
    return U


def fast_config(**overrides) -> TrainConfig:
    """Small training budget for unit tests."""
    values = {
        "n_centers": 4,
        "learning_rate": 1e-2,
        "max_epochs": 200,
        "tolerance": 0.0,
        "seed": 0,
    }
    values.update(overrides)
    return TrainConfig(**values)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def reg():
    return Regularizers(lambda_w=0.1, lambda_u=0.1, lambda_c=0.1)


@pytest.fixture
def unsupervised_instance():
    return build_random_instance(8, 3, 3, 1, "kmeans", seed=7)


@pytest.fixture
def supervised_instance():
    return build_random_instance(8, 3, 3, 2, "learn", seed=7)


@pytest.fixture
def regression_dataset(rng):
    X = rng.uniform(-2.0, 2.0, size=(60, 2))
    y = np.sin(X[:, 0]) + 0.5 * X[:, 1]
    return Dataset(X=X, y=y, task="regression")


@pytest.fixture
def binary_dataset(rng):
    X = np.vstack([rng.normal(-2.0, 0.5, size=(30, 2)), rng.normal(2.0, 0.5, size=(30, 2))])
    y = np.repeat([0, 1], 30)
    return Dataset(X=X, y=y, task="binary", class_labels=(-1, 1))
