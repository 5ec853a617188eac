"""Synthetic benchmark problems with known relevant features.

``p1``: 10-D binary problem, the positive class lives on a 4-D spherical shell.
``p2``: 10-D four-class XOR on the first three features.
``p3``: 10-D regression on the first five features (Friedman #1).
Plus three 2-D demos: two correlated Gaussians, half moons and a sine ridge.
"""

import logging
from typing import Any, Callable, Dict, Tuple

import numpy as np
from sklearn.datasets import make_friedman1, make_moons

from .dataset import Dataset

logger = logging.getLogger(__name__)

N_FEATURES = 10
P1_RELEVANT = 4
P1_SHELL = (9.0, 16.0)
P2_RELEVANT = 3
P2_VARIANCE = 0.5
P3_RELEVANT = 5

TWO_GAUSSIAN_MEANS = ((1.0, 1.0), (2.8, 2.8))
TWO_GAUSSIAN_COVARIANCE = ((0.81, 0.72), (0.72, 0.66))
SINE_RIDGE_RANGE = (-3.0, 3.0)

# (v1*v3, v2*v3) sign pair -> class index
XOR_CLASSES = {(1, 1): 0, (1, -1): 1, (-1, 1): 2, (-1, -1): 3}


def _check_n(n: int, minimum: int) -> None:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < minimum:
        raise ValueError(f"Sample count must be an integer >= {minimum}, got {n!r}")


def _mask(n_relevant: int, n_features: int = N_FEATURES) -> np.ndarray:
    mask = np.zeros(n_features, dtype=bool)
    mask[:n_relevant] = True
    return mask


def _shuffled(
    rng: np.random.Generator, X: np.ndarray, y: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    order = rng.permutation(X.shape[0])
    return X[order], y[order]


def _shell_samples(rng: np.random.Generator, count: int) -> np.ndarray:
    """Standard normal 4-vectors conditioned on ``9 <= ||x||^2 <= 16``."""
    low, high = P1_SHELL
    accepted = []
    remaining = count
    while remaining > 0:
        batch = rng.standard_normal((max(64, 8 * remaining), P1_RELEVANT))
        radius_sq = np.sum(batch**2, axis=1)
        keep = batch[(radius_sq >= low) & (radius_sq <= high)][:remaining]
        accepted.append(keep)
        remaining -= keep.shape[0]
    return np.vstack(accepted) if accepted else np.empty((0, P1_RELEVANT))


def gen_p1(n: int, seed: int = 0) -> Dataset:
    """Balanced binary problem; labels ``0``/``1`` stand for classes ``-1``/``+1``."""
    _check_n(n, 2)
    rng = np.random.default_rng(seed)
    n_negative = n // 2
    n_positive = n - n_negative
    negative = rng.standard_normal((n_negative, N_FEATURES))
    positive = np.empty((n_positive, N_FEATURES))
    positive[:, P1_RELEVANT:] = rng.standard_normal((n_positive, N_FEATURES - P1_RELEVANT))
    positive[:, :P1_RELEVANT] = _shell_samples(rng, n_positive)

    X = np.vstack([negative, positive])
    y = np.concatenate([np.zeros(n_negative, dtype=np.int64), np.ones(n_positive, dtype=np.int64)])
    X, y = _shuffled(rng, X, y)
    return Dataset(
        X=X, y=y, task="binary", relevant_mask=_mask(P1_RELEVANT), class_labels=(-1, 1)
    )


def xor_class(corner: Tuple[int, int, int]) -> int:
    """Class of a corner of ``{-1, 1}^3``; antipodal corners share a class."""
    v1, v2, v3 = corner
    return XOR_CLASSES[(v1 * v3, v2 * v3)]


def _xor_representatives() -> np.ndarray:
    """One corner per class, the one with ``v3 = +1``."""
    representatives = np.zeros((len(XOR_CLASSES), P2_RELEVANT))
    for (s1, s2), label in XOR_CLASSES.items():
        representatives[label] = (s1, s2, 1.0)
    return representatives


def gen_p2(n: int, seed: int = 0) -> Dataset:
    """Four balanced classes, each a mixture of ``N(v, 0.5 I)`` and ``N(-v, 0.5 I)``."""
    _check_n(n, 4)
    rng = np.random.default_rng(seed)
    n_classes = len(XOR_CLASSES)
    counts = [n // n_classes + (label < n % n_classes) for label in range(n_classes)]
    y = np.repeat(np.arange(n_classes), counts)

    signs = rng.choice([-1.0, 1.0], size=n)
    means = signs[:, None] * _xor_representatives()[y]
    relevant = means + np.sqrt(P2_VARIANCE) * rng.standard_normal((n, P2_RELEVANT))
    noise = rng.standard_normal((n, N_FEATURES - P2_RELEVANT))

    X, y = _shuffled(rng, np.hstack([relevant, noise]), y)
    return Dataset(
        X=X,
        y=y,
        task="multiclass",
        relevant_mask=_mask(P2_RELEVANT),
        class_labels=tuple(range(n_classes)),
    )


def gen_p3(n: int, seed: int = 0, noise: float = 1.0) -> Dataset:
    """``y = 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5 + eps``, inputs on [0, 1]."""
    _check_n(n, 2)
    if not noise >= 0:
        raise ValueError("Noise level must be nonnegative")
    X, y = make_friedman1(
        n_samples=n, n_features=N_FEATURES, noise=noise, random_state=seed
    )
    return Dataset(X=X, y=y, task="regression", relevant_mask=_mask(P3_RELEVANT))


def _two_gaussians(n: int, seed: int) -> Dataset:
    rng = np.random.default_rng(seed)
    counts = (n // 2, n - n // 2)
    parts = [
        rng.multivariate_normal(mean, TWO_GAUSSIAN_COVARIANCE, size=count)
        for mean, count in zip(TWO_GAUSSIAN_MEANS, counts)
    ]
    y = np.repeat([0, 1], counts)
    X, y = _shuffled(rng, np.vstack(parts), y)
    return Dataset(X=X, y=y, task="binary", relevant_mask=np.ones(2, dtype=bool))


def _moons(n: int, seed: int, noise: float = 0.1) -> Dataset:
    X, y = make_moons(n_samples=n, noise=noise, shuffle=True, random_state=seed)
    return Dataset(X=X, y=y, task="binary", relevant_mask=np.ones(2, dtype=bool))


def _sine_ridge(
    n: int, seed: int, a: float = 0.5, b: float = 0.5, noise: float = 0.0
) -> Dataset:
    """``y = sin(a x1 + b x2)`` on ``[-3, 3]^2``."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(*SINE_RIDGE_RANGE, size=(n, 2))
    y = np.sin(a * X[:, 0] + b * X[:, 1])
    if noise > 0:
        y = y + noise * rng.standard_normal(n)
    return Dataset(
        X=X, y=y, task="regression", relevant_mask=np.array([a != 0.0, b != 0.0])
    )


TOY_GENERATORS: Dict[str, Callable[..., Dataset]] = {
    "two_gaussians": _two_gaussians,
    "moons": _moons,
    "sine_ridge": _sine_ridge,
}


def gen_toys(kind: str, n: int, seed: int = 0, **params: Any) -> Dataset:
    """2-D demo problems; ``sine_ridge`` takes ``a``, ``b`` and ``noise``, ``moons`` takes ``noise``."""
    if kind not in TOY_GENERATORS:
        raise ValueError(
            f"Unknown toy problem: '{kind}'. Must be one of {', '.join(TOY_GENERATORS)}"
        )
    _check_n(n, 2)
    try:
        return TOY_GENERATORS[kind](n, seed, **params)
    except TypeError as e:
        raise ValueError(f"Invalid parameters for '{kind}': {e}") from e


PROBLEMS = ("p1", "p2", "p3") + tuple(TOY_GENERATORS)


def generate(problem: str, n: int, seed: int = 0, **params: Any) -> Dataset:
    """Dispatch by problem name, as used by the ``synth`` command."""
    if problem == "p1":
        return gen_p1(n, seed, **params)
    if problem == "p2":
        return gen_p2(n, seed, **params)
    if problem == "p3":
        return gen_p3(n, seed, **params)
    return gen_toys(problem, n, seed, **params)
