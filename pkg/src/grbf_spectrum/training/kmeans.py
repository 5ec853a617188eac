"""Lloyd's k-means with k-means++ seeding, used to place kernel centers."""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from numpy.typing import ArrayLike

from ..errors import DimensionError
from ..kernel import FloatArray

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 300

SeedLike = int | np.random.Generator


@dataclass(frozen=True)
class KMeansResult:
    """Final centers, the cluster of every row and the objective per iteration."""

    centers: FloatArray
    labels: np.ndarray
    inertia_history: List[float]

    @property
    def inertia(self) -> float:
        return self.inertia_history[-1]


def _squared_distances(X: FloatArray, centers: FloatArray) -> FloatArray:
    return np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)


def _plus_plus_seeds(X: FloatArray, k: int, rng: np.random.Generator) -> FloatArray:
    """k-means++: each new seed drawn with probability proportional to D(x)^2."""
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    closest = np.sum((X - X[chosen[0]]) ** 2, axis=1)
    for _ in range(1, k):
        total = float(closest.sum())
        if total > 0.0:
            index = int(rng.choice(n, p=closest / total))
        else:
            # Every remaining row coincides with a seed
            remaining = np.setdiff1d(np.arange(n), chosen)
            index = int(rng.choice(remaining))
        chosen.append(index)
        closest = np.minimum(closest, np.sum((X - X[index]) ** 2, axis=1))
    return X[chosen].copy()


def _fill_empty_clusters(
    X: FloatArray, centers: FloatArray, labels: np.ndarray, k: int
) -> np.ndarray:
    """Move the row farthest from its center into each empty cluster."""
    labels = labels.copy()
    for cluster in range(k):
        if np.any(labels == cluster):
            continue
        counts = np.bincount(labels, minlength=k)
        own = np.sum((X - centers[labels]) ** 2, axis=1)
        # Only take rows whose cluster keeps at least one member
        own[counts[labels] < 2] = -1.0
        farthest = int(np.argmax(own))
        logger.debug("Re-seeding empty cluster %s at row %s", cluster, farthest)
        labels[farthest] = cluster
    return labels


def _cluster_means(X: FloatArray, labels: np.ndarray, k: int) -> FloatArray:
    centers = np.zeros((k, X.shape[1]), dtype=np.float64)
    np.add.at(centers, labels, X)
    return centers / np.bincount(labels, minlength=k)[:, None]


def lloyd(
    X: ArrayLike, k: int, seed: SeedLike = 0, max_iter: int = DEFAULT_MAX_ITER
) -> KMeansResult:
    """Run Lloyd iterations from k-means++ seeds until assignments stop changing.

    Raises:
        ValueError: if ``k`` is not in ``[1, N]``
    """
    data = np.asarray(X, dtype=np.float64)
    if data.ndim != 2:
        raise DimensionError(f"k-means expects an N x D matrix, got shape {data.shape}")
    n = data.shape[0]
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"Number of clusters must be a positive integer, got {k!r}")
    if k > n:
        raise ValueError(f"Cannot form {k} clusters from {n} rows")

    rng = np.random.default_rng(seed)
    centers = _plus_plus_seeds(data, k, rng)
    distances = _squared_distances(data, centers)
    labels = np.argmin(distances, axis=1)
    history = [float(distances[np.arange(n), labels].sum())]

    for iteration in range(max_iter):
        labels = _fill_empty_clusters(data, centers, labels, k)
        centers = _cluster_means(data, labels, k)
        distances = _squared_distances(data, centers)
        new_labels = np.argmin(distances, axis=1)
        history.append(float(distances[np.arange(n), new_labels].sum()))
        if np.array_equal(new_labels, labels):
            logger.debug("k-means converged after %s iteration(s)", iteration + 1)
            break
        labels = new_labels
    else:
        logger.warning("k-means stopped after %s iterations without converging", max_iter)
        labels = _fill_empty_clusters(data, centers, labels, k)
        centers = _cluster_means(data, labels, k)

    return KMeansResult(centers=centers, labels=labels, inertia_history=history)


def kmeans(X: ArrayLike, k: int, seed: SeedLike = 0) -> FloatArray:
    """``k x D`` cluster centers; deterministic for a given seed."""
    return lloyd(X, k, seed).centers
