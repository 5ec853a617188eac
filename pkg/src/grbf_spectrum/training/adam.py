"""Adam update on a flat parameter vector."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike

from ..config.train_config import TrainConfig
from ..errors import DimensionError
from ..kernel import FloatArray


@dataclass(frozen=True)
class AdamState:
    """First and second moment estimates."""

    m: FloatArray
    v: FloatArray

    @classmethod
    def zeros(cls, size: int) -> "AdamState":
        return cls(m=np.zeros(size), v=np.zeros(size))


def adam_step(
    params: ArrayLike,
    grads: ArrayLike,
    state: AdamState,
    t: int,
    cfg: TrainConfig,
) -> Tuple[FloatArray, AdamState]:
    """One bias-corrected Adam step; ``t`` counts from 1."""
    theta = np.asarray(params, dtype=np.float64)
    g = np.asarray(grads, dtype=np.float64)
    if theta.shape != g.shape or state.m.shape != theta.shape:
        raise DimensionError(
            f"Adam shapes disagree: params {theta.shape}, grads {g.shape}, "
            f"moments {state.m.shape}"
        )
    if t < 1:
        raise ValueError(f"Adam step index must be >= 1, got {t}")

    beta1, beta2 = cfg.adam_beta1, cfg.adam_beta2
    m = beta1 * state.m + (1.0 - beta1) * g
    v = beta2 * state.v + (1.0 - beta2) * g**2
    m_hat = m / (1.0 - beta1**t)
    v_hat = v / (1.0 - beta2**t)
    updated = theta - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.adam_eps)
    return updated, AdamState(m=m, v=v)
