"""
Training: center placement, the Adam optimizer and the two fitting strategies
"""

from .adam import AdamState, adam_step
from .interpolation import fit_interpolation
from .kmeans import KMeansResult, kmeans, lloyd
from .trainer import TrainTrace, evaluate, fit_dataset, init_model, train

__all__ = [
    "AdamState",
    "KMeansResult",
    "TrainTrace",
    "adam_step",
    "evaluate",
    "fit_dataset",
    "fit_interpolation",
    "init_model",
    "kmeans",
    "lloyd",
    "train",
]
