"""Exception types raised across grbf-spectrum."""

from typing import Optional


class GrbfError(Exception):
    """Base class for all library errors"""

    pass


class DimensionError(GrbfError, ValueError):
    """Raised when array shapes or feature counts disagree"""

    pass


class ModeError(GrbfError):
    """Raised when an operation is not available in the model's center mode"""

    pass


class ConvergenceError(GrbfError):
    """Raised when an iterative solver exhausts its iteration budget"""

    pass


class SingularMatrixError(GrbfError):
    """Raised when a linear system is singular or too ill-conditioned to solve"""

    def __init__(self, message: str, condition: float):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class TrainingError(GrbfError):
    """Raised when training cannot start or produces a non-finite objective"""

    def __init__(self, message: str, epoch: Optional[int] = None):
        if epoch is not None:
            message = f"epoch {epoch}: {message}"
        super().__init__(message)
        self.epoch = epoch


class DataFormatError(GrbfError):
    """Raised when an input file cannot be parsed into a dataset"""

    def __init__(
        self, message: str, line: Optional[int] = None, column: Optional[str] = None
    ):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{', '.join(location)}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class GridSearchError(GrbfError):
    """Raised when a grid-search task fails; names the offending config"""

    def __init__(self, message: str, config_index: int):
        super().__init__(f"config #{config_index}: {message}")
        self.config_index = config_index
