"""The GRBF network, its regularized objective and analytic gradients.

A model evaluates ``f(x) = sum_m w_m exp(-0.5 (x - c_m)^T U^T U (x - c_m))``
on standardized inputs. Training minimizes

    R = 0.5 * sum_n ||y_n - f(x_n)||^2
        + 0.5 * lambda_u ||u||^2 + 0.5 * lambda_w ||w||^2 (+ 0.5 * lambda_c ||c||^2)

where the center penalty only applies when centers are learned.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, Mapping, NamedTuple, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike

from .config.train_config import SUPERVISED, CENTER_MODES, Regularizers
from .errors import DimensionError, ModeError
from .kernel import FloatArray, KernelTerms, PrecisionFactor, kernel_terms
from .utils.json_serializer import dump_json

logger = logging.getLogger(__name__)

MODEL_FORMAT = "grbf-spectrum-model"
MODEL_FORMAT_VERSION = 1
TASKS = ("regression", "binary", "multiclass")
BLOCKS = ("w", "u", "c")


@dataclass(frozen=True)
class Standardization:
    """Per-feature affine map ``(x - mean) / scale`` fitted on training rows."""

    mean: FloatArray
    scale: FloatArray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=np.float64).reshape(-1)
        scale = np.array(self.scale, dtype=np.float64).reshape(-1)
        if mean.shape != scale.shape:
            raise DimensionError("Standardization mean and scale lengths differ")
        if np.any(scale <= 0.0):
            raise ValueError("Standardization scale entries must be positive")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "scale", scale)

    @classmethod
    def identity(cls, dim: int) -> "Standardization":
        return cls(mean=np.zeros(dim), scale=np.ones(dim))

    @classmethod
    def fit(cls, X: ArrayLike) -> "Standardization":
        data = np.asarray(X, dtype=np.float64)
        scale = data.std(axis=0)
        # Constant features pass through centered but unscaled
        scale[scale == 0.0] = 1.0
        return cls(mean=data.mean(axis=0), scale=scale)

    def transform(self, X: ArrayLike) -> FloatArray:
        data = np.asarray(X, dtype=np.float64)
        if data.ndim == 1:
            data = data.reshape(1, -1)
        if data.shape[1] != self.mean.size:
            raise DimensionError(
                f"Expected {self.mean.size} features, got {data.shape[1]}"
            )
        return (data - self.mean) / self.scale

    def to_dict(self) -> Dict[str, Any]:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}


@dataclass(frozen=True)
class TargetTransform:
    """Min-max scaling of regression targets onto [0, 1]."""

    minimum: float
    maximum: float

    @classmethod
    def fit(cls, y: ArrayLike) -> "TargetTransform":
        values = np.asarray(y, dtype=np.float64)
        return cls(minimum=float(values.min()), maximum=float(values.max()))

    @property
    def span(self) -> float:
        span = self.maximum - self.minimum
        return span if span > 0.0 else 1.0

    def transform(self, y: ArrayLike) -> FloatArray:
        return (np.asarray(y, dtype=np.float64) - self.minimum) / self.span

    def inverse(self, y: ArrayLike) -> FloatArray:
        return np.asarray(y, dtype=np.float64) * self.span + self.minimum

    def to_dict(self) -> Dict[str, float]:
        return {"minimum": self.minimum, "maximum": self.maximum}


def n_outputs_for(task: str, n_classes: int) -> int:
    if task == "multiclass":
        return n_classes
    return 1


def encode_targets(
    task: str,
    y: ArrayLike,
    n_classes: int = 0,
    target_transform: Optional[TargetTransform] = None,
) -> FloatArray:
    """Targets as an ``N x O`` matrix in the scale the network is fitted on.

    Regression targets go through ``target_transform`` when given; binary
    labels become a single 0/1 column; multiclass labels are one-hot encoded.
    """
    values = np.asarray(y)
    if task == "regression":
        column = values.astype(np.float64)
        if target_transform is not None:
            column = target_transform.transform(column)
        return column.reshape(-1, 1)
    labels = values.astype(np.int64)
    if task == "binary":
        return labels.astype(np.float64).reshape(-1, 1)
    if task == "multiclass":
        encoded = np.zeros((labels.size, n_classes), dtype=np.float64)
        encoded[np.arange(labels.size), labels] = 1.0
        return encoded
    raise ValueError(f"Invalid task: '{task}'. Must be one of {', '.join(TASKS)}")


@dataclass(frozen=True)
class GrbfnnModel:
    """Parameters and fitted preprocessing of a GRBF network."""

    weights: FloatArray
    factor: PrecisionFactor
    centers: FloatArray
    center_mode: str
    standardization: Standardization
    target_transform: Optional[TargetTransform] = None
    task: str = "regression"
    class_labels: Tuple[Any, ...] = ()
    feature_names: Tuple[str, ...] = ()
    is_fitted: bool = False
    train_config: Optional[Dict[str, Any]] = None
    train_metric: Optional[float] = None
    extras: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64)
        if weights.ndim == 1:
            weights = weights.reshape(-1, 1)
        centers = np.array(self.centers, dtype=np.float64)
        if centers.ndim != 2 or centers.shape[1] != self.factor.dim:
            raise DimensionError(
                f"Centers must be M x {self.factor.dim}, got shape {centers.shape}"
            )
        if weights.ndim != 2 or weights.shape[0] != centers.shape[0]:
            raise DimensionError(
                f"Weights must be {centers.shape[0]} x O, got shape {weights.shape}"
            )
        if self.center_mode not in CENTER_MODES:
            raise ValueError(f"Invalid center mode: '{self.center_mode}'")
        if self.task not in TASKS:
            raise ValueError(f"Invalid task: '{self.task}'")
        if self.standardization.mean.size != self.factor.dim:
            raise DimensionError("Standardization does not match the feature count")
        weights.setflags(write=False)
        centers.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "centers", centers)
        object.__setattr__(self, "class_labels", tuple(self.class_labels))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_features(self) -> int:
        return self.factor.dim

    @property
    def n_centers(self) -> int:
        return self.centers.shape[0]

    @property
    def n_outputs(self) -> int:
        return self.weights.shape[1]

    @property
    def is_supervised(self) -> bool:
        return self.center_mode == SUPERVISED

    @property
    def n_parameters(self) -> int:
        """Free parameters: ``M*O + D + D(D-1)/2`` plus ``M*D`` for learned centers."""
        count = self.weights.size + self.factor.u.size
        if self.is_supervised:
            count += self.centers.size
        return count

    def with_params(
        self,
        weights: Optional[ArrayLike] = None,
        u: Optional[ArrayLike] = None,
        centers: Optional[ArrayLike] = None,
    ) -> "GrbfnnModel":
        return replace(
            self,
            weights=self.weights if weights is None else weights,
            factor=self.factor if u is None else self.factor.with_u(u),
            centers=self.centers if centers is None else centers,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": MODEL_FORMAT,
            "version": MODEL_FORMAT_VERSION,
            "dims": {
                "D": self.n_features,
                "M": self.n_centers,
                "O": self.n_outputs,
            },
            "task": self.task,
            "center_mode": self.center_mode,
            "class_labels": list(self.class_labels),
            "feature_names": list(self.feature_names),
            "u": self.factor.u.tolist(),
            "weights": self.weights.reshape(-1).tolist(),
            "centers": self.centers.reshape(-1).tolist(),
            "standardization": self.standardization.to_dict(),
            "target_transform": (
                self.target_transform.to_dict() if self.target_transform else None
            ),
            "is_fitted": self.is_fitted,
            "train_config": self.train_config,
            "train_metric": self.train_metric,
            "extras": self.extras,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GrbfnnModel":
        if data.get("format") != MODEL_FORMAT:
            raise ValueError("Not a grbf-spectrum model document")
        if data.get("version") != MODEL_FORMAT_VERSION:
            raise ValueError(f"Unsupported model format version: {data.get('version')}")
        dims = data["dims"]
        D, M, O = int(dims["D"]), int(dims["M"]), int(dims["O"])
        transform = data.get("target_transform")
        return cls(
            weights=np.asarray(data["weights"], dtype=np.float64).reshape(M, O),
            factor=PrecisionFactor(dim=D, u=np.asarray(data["u"], dtype=np.float64)),
            centers=np.asarray(data["centers"], dtype=np.float64).reshape(M, D),
            center_mode=data["center_mode"],
            standardization=Standardization(**data["standardization"]),
            target_transform=TargetTransform(**transform) if transform else None,
            task=data["task"],
            class_labels=tuple(data.get("class_labels") or ()),
            feature_names=tuple(data.get("feature_names") or ()),
            is_fitted=bool(data.get("is_fitted", False)),
            train_config=data.get("train_config"),
            train_metric=data.get("train_metric"),
            extras=dict(data.get("extras") or {}),
        )


def save_model(model: GrbfnnModel, path: str | Path) -> Path:
    """Write the model document; floats keep full precision."""
    return dump_json(model.to_dict(), path)


def load_model(path: str | Path) -> GrbfnnModel:
    model_file = Path(path).expanduser()
    if not model_file.exists():
        raise FileNotFoundError(f"Model file not found: {path}")
    with open(model_file, encoding="utf-8") as f:
        return GrbfnnModel.from_dict(json.load(f))


# -- objective ---------------------------------------------------------------


class Evaluation(NamedTuple):
    """One pass over the data: kernel terms, outputs, residual and losses."""

    terms: KernelTerms
    output: FloatArray
    residual: FloatArray
    loss_E: float
    loss_R: float


def _targets(model: GrbfnnModel, Y: ArrayLike, n_rows: int) -> FloatArray:
    targets = np.asarray(Y, dtype=np.float64)
    if targets.ndim == 1:
        targets = targets.reshape(-1, 1)
    if targets.shape != (n_rows, model.n_outputs):
        raise DimensionError(
            f"Targets must have shape ({n_rows}, {model.n_outputs}), got {targets.shape}"
        )
    return targets


def forward_standardized(model: GrbfnnModel, Z: ArrayLike) -> FloatArray:
    """Network output for inputs already in the model's standardized space."""
    return kernel_terms(Z, model.centers, model.factor).phi @ model.weights


def forward(model: GrbfnnModel, X: ArrayLike) -> FloatArray:
    """``Phi w`` for raw inputs; the stored standardization is applied first."""
    return forward_standardized(model, model.standardization.transform(X))


def penalty_G(model: GrbfnnModel, reg: Regularizers) -> float:
    penalty = 0.5 * reg.lambda_u * float(model.factor.u @ model.factor.u)
    penalty += 0.5 * reg.lambda_w * float(np.sum(model.weights**2))
    if model.is_supervised:
        penalty += 0.5 * reg.lambda_c * float(np.sum(model.centers**2))
    return penalty


def evaluate_standardized(
    model: GrbfnnModel, Z: ArrayLike, Y: ArrayLike, reg: Regularizers
) -> Evaluation:
    terms = kernel_terms(Z, model.centers, model.factor)
    targets = _targets(model, Y, terms.phi.shape[0])
    output = terms.phi @ model.weights
    residual = targets - output
    loss_E = 0.5 * float(np.sum(residual**2))
    return Evaluation(
        terms=terms,
        output=output,
        residual=residual,
        loss_E=loss_E,
        loss_R=loss_E + penalty_G(model, reg),
    )


def _evaluate(
    model: GrbfnnModel, X: ArrayLike, Y: ArrayLike, reg: Regularizers
) -> Evaluation:
    return evaluate_standardized(model, model.standardization.transform(X), Y, reg)


def loss_E(model: GrbfnnModel, X: ArrayLike, Y: ArrayLike) -> float:
    """Half the squared residual norm."""
    return _evaluate(model, X, Y, Regularizers()).loss_E


def loss_R(model: GrbfnnModel, X: ArrayLike, Y: ArrayLike, reg: Regularizers) -> float:
    """Regularized objective ``E + G``."""
    return _evaluate(model, X, Y, reg).loss_R


# -- gradients ---------------------------------------------------------------


def gradients_from(
    model: GrbfnnModel, evaluation: Evaluation, reg: Regularizers
) -> Dict[str, FloatArray]:
    """Analytic gradients of ``R`` for every trainable block.

    With ``r = Y - Phi w`` and ``s = r w^T``, ``q_nm = ||U d_nm||^2``:

    * ``dR/dw = -Phi^T r + lambda_w w``
    * ``dR/dU = sum_nm s_nm Phi_nm (U d_nm) d_nm^T``, taken on the upper triangle
    * ``dR/dc_m = -sum_n s_nm Phi_nm U^T U d_nm + lambda_c c_m``
    """
    terms = evaluation.terms
    weighted = (evaluation.residual @ model.weights.T) * terms.phi

    grads = {
        "w": -terms.phi.T @ evaluation.residual + reg.lambda_w * model.weights,
    }
    grad_U = np.einsum("nm,nmi,nmj->ij", weighted, terms.projected, terms.diff)
    rows, cols = np.triu_indices(model.n_features)
    grads["u"] = grad_U[rows, cols] + reg.lambda_u * model.factor.u
    if model.is_supervised:
        pulled = np.einsum("nm,nmi->mi", weighted, terms.projected)
        grads["c"] = -(pulled @ model.factor.matrix) + reg.lambda_c * model.centers
    return grads


def grad_w(model: GrbfnnModel, X: ArrayLike, Y: ArrayLike, reg: Regularizers) -> FloatArray:
    return gradients_from(model, _evaluate(model, X, Y, reg), reg)["w"]


def grad_u(model: GrbfnnModel, X: ArrayLike, Y: ArrayLike, reg: Regularizers) -> FloatArray:
    return gradients_from(model, _evaluate(model, X, Y, reg), reg)["u"]


def grad_c(model: GrbfnnModel, X: ArrayLike, Y: ArrayLike, reg: Regularizers) -> FloatArray:
    if not model.is_supervised:
        raise ModeError("Center gradients require the supervised center mode")
    return gradients_from(model, _evaluate(model, X, Y, reg), reg)["c"]


GRADIENT_FUNCTIONS: Dict[str, Callable[..., FloatArray]] = {
    "w": grad_w,
    "u": grad_u,
    "c": grad_c,
}


def model_blocks(model: GrbfnnModel) -> Tuple[str, ...]:
    """Trainable parameter blocks for the model's center mode."""
    return BLOCKS if model.is_supervised else BLOCKS[:2]


def _block_values(model: GrbfnnModel, block: str) -> FloatArray:
    if block == "w":
        return model.weights
    if block == "u":
        return model.factor.u
    if block == "c":
        return model.centers
    raise ValueError(f"Unknown parameter block: '{block}'")


def _replace_block(model: GrbfnnModel, block: str, values: FloatArray) -> GrbfnnModel:
    if block == "w":
        return model.with_params(weights=values)
    if block == "u":
        return model.with_params(u=values)
    return model.with_params(centers=values)


def finite_difference_gradient(
    model: GrbfnnModel,
    X: ArrayLike,
    Y: ArrayLike,
    reg: Regularizers,
    block: str,
    step: float = 1e-5,
) -> FloatArray:
    """Central finite differences of ``loss_R`` with respect to one block."""
    if not step > 0:
        raise ValueError("Finite-difference step must be positive")
    if block == "c" and not model.is_supervised:
        raise ModeError("Center gradients require the supervised center mode")
    base = np.array(_block_values(model, block), dtype=np.float64)
    gradient = np.zeros_like(base)
    flat = base.reshape(-1)
    out = gradient.reshape(-1)
    for index in range(flat.size):
        original = flat[index]
        flat[index] = original + step
        upper = loss_R(_replace_block(model, block, base.copy()), X, Y, reg)
        flat[index] = original - step
        lower = loss_R(_replace_block(model, block, base.copy()), X, Y, reg)
        flat[index] = original
        out[index] = (upper - lower) / (2.0 * step)
    return gradient


def relative_error(analytic: ArrayLike, reference: ArrayLike) -> float:
    """``||a - b|| / max(||a||, ||b||, 1e-12)``."""
    a = np.asarray(analytic, dtype=np.float64).reshape(-1)
    b = np.asarray(reference, dtype=np.float64).reshape(-1)
    if a.shape != b.shape:
        raise DimensionError(f"Gradient shapes differ: {a.shape} vs {b.shape}")
    denom = max(float(np.linalg.norm(a)), float(np.linalg.norm(b)), 1e-12)
    return float(np.linalg.norm(a - b)) / denom


@dataclass(frozen=True)
class GradientReport:
    """Relative error of each analytic gradient block against finite differences."""

    errors: Dict[str, float]
    step: float

    @property
    def max_error(self) -> float:
        return max(self.errors.values())

    def passed(self, tolerance: float = 1e-5) -> bool:
        return self.max_error <= tolerance

    def render(self) -> str:
        lines = [f"block\trelative_error (step={self.step:g})"]
        for block, error in self.errors.items():
            lines.append(f"{block}\t{error:.3e}")
        return "\n".join(lines)


def gradient_check(
    model: GrbfnnModel,
    X: ArrayLike,
    Y: ArrayLike,
    reg: Regularizers,
    step: float = 1e-5,
    analytic: Optional[Mapping[str, Callable[..., FloatArray]]] = None,
) -> GradientReport:
    """Compare analytic gradients with central finite differences of ``loss_R``.

    ``analytic`` may replace the gradient function of any block; it is called
    as ``fn(model, X, Y, reg)``.
    """
    if not step > 0:
        raise ValueError("Finite-difference step must be positive")
    functions = dict(GRADIENT_FUNCTIONS)
    functions.update(analytic or {})
    errors = {}
    for block in model_blocks(model):
        computed = functions[block](model, X, Y, reg)
        reference = finite_difference_gradient(model, X, Y, reg, block, step)
        errors[block] = relative_error(computed, reference)
        logger.debug("Gradient check block %s: relative error %.3e", block, errors[block])
    return GradientReport(errors=errors, step=step)


# -- prediction --------------------------------------------------------------


def predict_proba(model: GrbfnnModel, X: ArrayLike) -> FloatArray:
    """Network outputs clamped to [0, 1], for display as class probabilities."""
    return np.clip(forward(model, X), 0.0, 1.0)


def predict_labels(model: GrbfnnModel, output: FloatArray) -> np.ndarray:
    """Class indices from raw outputs: threshold 0.5 (binary) or argmax."""
    if model.task == "binary":
        return (output[:, 0] >= 0.5).astype(np.int64)
    return np.argmax(output, axis=1).astype(np.int64)


def predict(model: GrbfnnModel, X: ArrayLike) -> np.ndarray:
    """Class labels for classification, target-unit values for regression."""
    output = forward(model, X)
    if model.task == "regression":
        values = output[:, 0]
        if model.target_transform is not None:
            values = model.target_transform.inverse(values)
        return values
    indices = predict_labels(model, output)
    if model.class_labels:
        return np.asarray(model.class_labels)[indices]
    return indices
