"""Eigenanalysis of the learned precision matrix.

The eigenvalues of ``P`` are the curvatures of the kernel's quadratic form
along the eigenvectors. Large eigenvalues mark directions in which the
fitted network varies; their span is the active subspace. Feature importance
weighs the absolute eigenvector components by their eigenvalues.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from .errors import ConvergenceError, DimensionError
from .kernel import FloatArray, precision_matrix
from .model import GrbfnnModel, forward_standardized

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-10
OFF_DIAGONAL_TOLERANCE = 1e-12
MAX_SWEEPS = 100
NEGATIVE_CLAMP = 1e-10
SIGN_EPSILON = 1e-12


@dataclass(frozen=True)
class PrecisionSpectrum:
    """Eigenvalues sorted descending with matching orthonormal eigenvector columns."""

    eigenvalues: FloatArray
    eigenvectors: FloatArray

    def __post_init__(self):
        gamma = np.array(self.eigenvalues, dtype=np.float64).reshape(-1)
        V = np.array(self.eigenvectors, dtype=np.float64)
        if V.shape != (gamma.size, gamma.size):
            raise DimensionError(
                f"Eigenvectors must be {gamma.size} x {gamma.size}, got {V.shape}"
            )
        object.__setattr__(self, "eigenvalues", gamma)
        object.__setattr__(self, "eigenvectors", V)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    @property
    def decay(self) -> FloatArray:
        """``gamma_k / sum(gamma)``; all zeros for a zero spectrum."""
        total = float(self.eigenvalues.sum())
        if total <= 0.0:
            return np.zeros_like(self.eigenvalues)
        return self.eigenvalues / total

    @property
    def cumulative(self) -> FloatArray:
        return np.cumsum(self.decay)

    @property
    def dominant_ratio(self) -> float:
        """Share of the leading eigenvalue, ``gamma_1 / sum(gamma)``."""
        return float(self.decay[0])


def _rotate(A: FloatArray, V: FloatArray, p: int, q: int) -> None:
    """Apply the Jacobi rotation that zeroes ``A[p, q]`` in place."""
    theta = 0.5 * math.atan2(2.0 * A[p, q], A[q, q] - A[p, p])
    c, s = math.cos(theta), math.sin(theta)

    col_p, col_q = A[:, p].copy(), A[:, q].copy()
    A[:, p] = c * col_p - s * col_q
    A[:, q] = s * col_p + c * col_q
    row_p, row_q = A[p, :].copy(), A[q, :].copy()
    A[p, :] = c * row_p - s * row_q
    A[q, :] = s * row_p + c * row_q
    A[p, q] = A[q, p] = 0.0

    vec_p, vec_q = V[:, p].copy(), V[:, q].copy()
    V[:, p] = c * vec_p - s * vec_q
    V[:, q] = s * vec_p + c * vec_q


def _off_diagonal_norm(A: FloatArray) -> float:
    return float(np.sqrt(np.sum(A**2) - np.sum(np.diag(A) ** 2).clip(max=np.sum(A**2))))


def _apply_sign_convention(V: FloatArray) -> FloatArray:
    """Flip each column so its first non-negligible component is positive."""
    V = V.copy()
    for k in range(V.shape[1]):
        significant = np.flatnonzero(np.abs(V[:, k]) > SIGN_EPSILON)
        if significant.size and V[significant[0], k] < 0.0:
            V[:, k] = -V[:, k]
    return V


def eig_symmetric(P: ArrayLike, max_sweeps: int = MAX_SWEEPS) -> PrecisionSpectrum:
    """Eigen-decompose a symmetric matrix by cyclic Jacobi.

    Sweeps over all ``(p, q)`` pairs until the off-diagonal Frobenius mass is
    at most ``1e-12 * ||P||_F``. Eigenvalues within ``-1e-10`` of zero are
    clamped to zero. Clearly negative eigenvalues, which ``U^T U`` never
    produces, are kept and logged as a warning.

    Raises:
        DimensionError: if ``P`` is not square
        ValueError: if ``P`` is asymmetric
        ConvergenceError: if ``max_sweeps`` sweeps do not converge
    """
    A = np.array(P, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A))) if A.size else 1.0)
    if np.max(np.abs(A - A.T), initial=0.0) > SYMMETRY_TOLERANCE * scale:
        raise ValueError("Matrix is not symmetric")
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    V = np.eye(n)
    threshold = OFF_DIAGONAL_TOLERANCE * float(np.linalg.norm(A))

    for sweep in range(max_sweeps + 1):
        if _off_diagonal_norm(A) <= threshold:
            logger.debug("Jacobi converged after %s sweep(s)", sweep)
            break
        if sweep == max_sweeps:
            raise ConvergenceError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] != 0.0:
                    _rotate(A, V, p, q)

    gamma = np.diag(A).copy()
    negative = gamma < -NEGATIVE_CLAMP * scale
    if np.any(negative):
        logger.warning("Matrix is not positive semidefinite (eigenvalue %.3e)", gamma.min())
    gamma[(gamma < 0.0) & ~negative] = 0.0

    order = np.argsort(-gamma, kind="stable")
    return PrecisionSpectrum(
        eigenvalues=gamma[order],
        eigenvectors=_apply_sign_convention(V[:, order]),
    )


def model_spectrum(model: GrbfnnModel) -> PrecisionSpectrum:
    """Spectrum of the model's precision matrix (in standardized coordinates)."""
    return eig_symmetric(precision_matrix(model.factor))


@dataclass(frozen=True)
class FeatureImportance:
    """Max-normalized importance scores and their per-eigenpair addends."""

    scores: FloatArray
    per_component: FloatArray

    @property
    def ranking(self) -> np.ndarray:
        """Feature indices from most to least important."""
        return np.argsort(-self.scores, kind="stable")


def feature_importance(spectrum: PrecisionSpectrum) -> FeatureImportance:
    """``sum_k gamma_k |v_k|``, divided by its maximum entry."""
    per_component = np.abs(spectrum.eigenvectors) * spectrum.eigenvalues[None, :]
    raw = per_component.sum(axis=1)
    top = float(raw.max()) if raw.size else 0.0
    if top <= 0.0:
        return FeatureImportance(
            scores=np.zeros_like(raw), per_component=np.zeros_like(per_component)
        )
    return FeatureImportance(scores=raw / top, per_component=per_component / top)


def active_projection(X: ArrayLike, spectrum: PrecisionSpectrum, k: int) -> FloatArray:
    """Coordinates of standardized rows along the ``k`` leading eigenvectors."""
    if not 1 <= k <= spectrum.dim:
        raise ValueError(f"Number of components must be in [1, {spectrum.dim}], got {k}")
    data = np.asarray(X, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != spectrum.dim:
        raise DimensionError(
            f"X must have {spectrum.dim} columns, got shape {data.shape}"
        )
    return data @ spectrum.eigenvectors[:, :k]


def active_dimension(spectrum: PrecisionSpectrum, threshold: float) -> int:
    """Smallest ``k`` whose leading eigenvalues carry ``threshold`` of the total."""
    if not 0.0 < threshold <= 1.0:
        raise ValueError(f"Threshold must be in (0, 1], got {threshold}")
    if float(spectrum.eigenvalues.sum()) <= 0.0:
        raise ValueError("Active dimension is undefined for an all-zero spectrum")
    reached = np.flatnonzero(spectrum.cumulative >= threshold - 1e-12)
    return int(reached[0]) + 1 if reached.size else spectrum.dim


@dataclass(frozen=True)
class SurfaceGrid:
    """Model outputs on a regular grid in the plane of the two leading eigenvectors."""

    z1: FloatArray
    z2: FloatArray
    values: FloatArray


def subspace_surface(
    model: GrbfnnModel,
    spectrum: PrecisionSpectrum,
    bounds: Tuple[float, float, float, float],
    resolution: int = 50,
) -> SurfaceGrid:
    """Evaluate the model on ``x = z1 v1 + z2 v2`` with other latent coordinates zero.

    ``bounds`` is ``(z1_min, z1_max, z2_min, z2_max)``; points are in the
    model's standardized input space. Rows are ordered with ``z2`` varying
    fastest.
    """
    if not model.is_fitted:
        raise ValueError("Subspace surface requires a trained model")
    if spectrum.dim != model.n_features:
        raise DimensionError(
            f"Spectrum has dimension {spectrum.dim}, model has {model.n_features} features"
        )
    if spectrum.dim < 2:
        raise DimensionError("Subspace surface needs at least two features")
    if resolution < 2:
        raise ValueError("Surface resolution must be at least 2")
    z1_min, z1_max, z2_min, z2_max = bounds
    grid_1, grid_2 = np.meshgrid(
        np.linspace(z1_min, z1_max, resolution),
        np.linspace(z2_min, z2_max, resolution),
        indexing="ij",
    )
    latent = np.column_stack([grid_1.reshape(-1), grid_2.reshape(-1)])
    points = latent @ spectrum.eigenvectors[:, :2].T
    return SurfaceGrid(
        z1=latent[:, 0],
        z2=latent[:, 1],
        values=forward_standardized(model, points),
    )


@dataclass(frozen=True)
class SelectionReport:
    """How well importance scores separate known relevant features from noise."""

    n_relevant: int
    top_k_hits: int
    violations: int
    mean_absolute_error: float


def selection_report(scores: ArrayLike, relevant_mask: Sequence[bool]) -> SelectionReport:
    """Compare scores with a 0/1 ground-truth relevance vector.

    ``top_k_hits`` counts relevant features among the top ``k`` ranks, with
    ``k`` the number of relevant features; ``violations`` counts noise
    features scoring at or above the weakest relevant feature.
    """
    values = np.asarray(scores, dtype=np.float64).reshape(-1)
    mask = np.asarray(relevant_mask, dtype=bool).reshape(-1)
    if values.shape != mask.shape:
        raise DimensionError(
            f"Scores have {values.size} entries, relevance mask has {mask.size}"
        )
    n_relevant = int(mask.sum())
    if n_relevant == 0:
        raise ValueError("Relevance mask marks no feature as relevant")
    ranking = np.argsort(-values, kind="stable")
    top_k_hits = int(mask[ranking[:n_relevant]].sum())
    weakest = float(values[mask].min())
    violations = int(np.sum(values[~mask] >= weakest))
    return SelectionReport(
        n_relevant=n_relevant,
        top_k_hits=top_k_hits,
        violations=violations,
        mean_absolute_error=float(np.mean(np.abs(values - mask.astype(np.float64)))),
    )
