"""Training configuration classes with validation."""

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict

# Default values
DEFAULT_N_CENTERS = 32
DEFAULT_LEARNING_RATE = 1e-3
DEFAULT_MAX_EPOCHS = 10000
DEFAULT_TOLERANCE = 1e-9
DEFAULT_SEED = 0
DEFAULT_LOG_EVERY = 500

UNSUPERVISED = "unsupervised"
SUPERVISED = "supervised"
CENTER_MODES = (UNSUPERVISED, SUPERVISED)
# Command-line spelling of the two center modes
MODE_ALIASES = {"kmeans": UNSUPERVISED, "learn": SUPERVISED}
CENTER_INITS = ("kmeans", "random")


def _normalize_nonnegative(value: Any, field_name: str) -> float:
    """Validate a nonnegative real parameter."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"Field '{field_name}' must be a nonnegative number")
    if not value >= 0:
        raise ValueError(f"Field '{field_name}' must be a nonnegative number")
    return float(value)


def _normalize_positive(value: Any, field_name: str) -> float:
    """Validate a strictly positive real parameter."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"Field '{field_name}' must be a positive number")
    if not value > 0:
        raise ValueError(f"Field '{field_name}' must be a positive number")
    return float(value)


def _normalize_positive_int(value: Any, field_name: str) -> int:
    """Validate a positive integer parameter."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"Field '{field_name}' must be a positive integer")
    if value < 1:
        raise ValueError(f"Field '{field_name}' must be a positive integer")
    return value


def _normalize_unit_interval(value: Any, field_name: str) -> float:
    """Validate a real in [0, 1)."""
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"Field '{field_name}' must be a number in [0, 1)")
    if not 0.0 <= value < 1.0:
        raise ValueError(f"Field '{field_name}' must be a number in [0, 1)")
    return float(value)


def normalize_center_mode(value: Any) -> str:
    """Accept both the model spelling and the command-line spelling of a mode."""
    mode = MODE_ALIASES.get(value, value)
    if mode not in CENTER_MODES:
        raise ValueError(
            f"Invalid center mode: '{value}'. Must be one of "
            f"{', '.join(CENTER_MODES + tuple(MODE_ALIASES))}"
        )
    return mode


@dataclass(frozen=True)
class Regularizers:
    """Penalty weights for the weights, the precision factor and the centers."""

    lambda_w: float = 0.0
    lambda_u: float = 0.0
    lambda_c: float = 0.0

    def __post_init__(self):
        for name in ("lambda_w", "lambda_u", "lambda_c"):
            object.__setattr__(
                self, name, _normalize_nonnegative(getattr(self, name), name)
            )


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of one training run."""

    n_centers: int = DEFAULT_N_CENTERS
    center_mode: str = UNSUPERVISED
    reg: Regularizers = field(default_factory=Regularizers)
    learning_rate: float = DEFAULT_LEARNING_RATE
    max_epochs: int = DEFAULT_MAX_EPOCHS
    tolerance: float = DEFAULT_TOLERANCE
    seed: int = DEFAULT_SEED
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    center_init: str = "kmeans"
    standardize: bool = True
    scale_targets: bool = True
    log_every: int = DEFAULT_LOG_EVERY

    def __post_init__(self):
        object.__setattr__(
            self, "n_centers", _normalize_positive_int(self.n_centers, "n_centers")
        )
        object.__setattr__(self, "center_mode", normalize_center_mode(self.center_mode))
        if not isinstance(self.reg, Regularizers):
            raise ValueError("Field 'reg' must be a Regularizers instance")
        object.__setattr__(
            self,
            "learning_rate",
            _normalize_positive(self.learning_rate, "learning_rate"),
        )
        object.__setattr__(
            self, "max_epochs", _normalize_positive_int(self.max_epochs, "max_epochs")
        )
        object.__setattr__(
            self, "tolerance", _normalize_nonnegative(self.tolerance, "tolerance")
        )
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError("Field 'seed' must be an unsigned integer")
        object.__setattr__(
            self, "adam_beta1", _normalize_unit_interval(self.adam_beta1, "adam_beta1")
        )
        object.__setattr__(
            self, "adam_beta2", _normalize_unit_interval(self.adam_beta2, "adam_beta2")
        )
        object.__setattr__(
            self, "adam_eps", _normalize_positive(self.adam_eps, "adam_eps")
        )
        if self.center_init not in CENTER_INITS:
            raise ValueError(
                f"Invalid center_init: '{self.center_init}'. Must be one of "
                f"{', '.join(CENTER_INITS)}"
            )
        object.__setattr__(
            self, "log_every", _normalize_positive_int(self.log_every, "log_every")
        )

    @property
    def is_supervised(self) -> bool:
        return self.center_mode == SUPERVISED

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrainConfig":
        """Build a config from a flat or nested mapping.

        Regularizers may be given either nested under ``reg`` or as top-level
        ``lambda_w``/``lambda_u``/``lambda_c`` keys.
        """
        known = {f.name for f in fields(cls)}
        reg_keys = {f.name for f in fields(Regularizers)}
        values = dict(data)
        reg_values = dict(values.pop("reg", None) or {})
        for key in reg_keys:
            if key in values:
                reg_values[key] = values.pop(key)

        unknown = sorted(set(values) - known)
        unknown += sorted(f"reg.{key}" for key in set(reg_values) - reg_keys)
        if unknown:
            raise ValueError(f"Unknown training option(s): {', '.join(unknown)}")

        return cls(reg=Regularizers(**reg_values), **values)
