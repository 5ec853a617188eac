"""
Configuration module for training and search settings
"""

from .grid import GridSpec, default_grid
from .loader import ConfigDocument, load_config, load_config_from_text
from .train_config import (
    CENTER_MODES,
    SUPERVISED,
    UNSUPERVISED,
    Regularizers,
    TrainConfig,
)

__all__ = [
    "CENTER_MODES",
    "SUPERVISED",
    "UNSUPERVISED",
    "ConfigDocument",
    "GridSpec",
    "Regularizers",
    "TrainConfig",
    "default_grid",
    "load_config",
    "load_config_from_text",
]
