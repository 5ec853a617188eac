"""Precision-matrix parameterization and the Mahalanobis Gaussian kernel.

The precision matrix is never stored directly. It is parameterized as
``P = U^T U`` with ``U`` upper triangular, and ``U`` itself is packed into the
vector ``u = vech(U)``. Packing order is row-major over the upper triangle:
row 0 first, diagonal entry first within each row.

Quadratic forms are evaluated as ``||U d||^2`` rather than ``d^T P d``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, TypeAlias

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DimensionError

FloatArray: TypeAlias = NDArray[np.float64]
KernelMatrix: TypeAlias = FloatArray


def vech_length(dim: int) -> int:
    """Number of free entries of a ``dim x dim`` upper-triangular matrix."""
    return dim * (dim + 1) // 2


def dim_from_vech_length(length: int) -> int:
    """Invert :func:`vech_length`; raises if ``length`` is not triangular."""
    dim = (math.isqrt(8 * length + 1) - 1) // 2
    if dim < 1 or vech_length(dim) != length:
        raise DimensionError(
            f"Vector of length {length} is not a half-vectorized square matrix"
        )
    return dim


def vech(U: ArrayLike) -> FloatArray:
    """Pack the upper triangle of ``U`` into a vector (row-major)."""
    matrix = np.asarray(U, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"vech expects a square matrix, got shape {matrix.shape}")
    if np.any(np.tril(matrix, k=-1) != 0.0):
        raise ValueError("vech expects an upper-triangular matrix")
    rows, cols = np.triu_indices(matrix.shape[0])
    return matrix[rows, cols].copy()


def unvech(u: ArrayLike, dim: int | None = None) -> FloatArray:
    """Rebuild the upper-triangular matrix packed by :func:`vech`."""
    vector = np.asarray(u, dtype=np.float64)
    if vector.ndim != 1:
        raise DimensionError(f"unvech expects a vector, got shape {vector.shape}")
    if dim is None:
        dim = dim_from_vech_length(vector.size)
    elif vector.size != vech_length(dim):
        raise DimensionError(
            f"Expected {vech_length(dim)} entries for dimension {dim}, got {vector.size}"
        )
    matrix = np.zeros((dim, dim), dtype=np.float64)
    rows, cols = np.triu_indices(dim)
    matrix[rows, cols] = vector
    return matrix


@dataclass(frozen=True)
class PrecisionFactor:
    """Half-vectorized upper-triangular factor ``U`` of ``P = U^T U``."""

    dim: int
    u: FloatArray

    def __post_init__(self) -> None:
        if isinstance(self.dim, bool) or not isinstance(self.dim, (int, np.integer)):
            raise ValueError("PrecisionFactor dim must be a positive integer")
        if self.dim < 1:
            raise ValueError("PrecisionFactor dim must be a positive integer")
        vector = np.array(self.u, dtype=np.float64).reshape(-1)
        if vector.size != vech_length(int(self.dim)):
            raise DimensionError(
                f"PrecisionFactor of dim {self.dim} needs {vech_length(int(self.dim))} "
                f"entries, got {vector.size}"
            )
        vector.setflags(write=False)
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "u", vector)

    @classmethod
    def from_matrix(cls, U: ArrayLike) -> "PrecisionFactor":
        packed = vech(U)
        return cls(dim=dim_from_vech_length(packed.size), u=packed)

    @classmethod
    def isotropic(cls, dim: int, scale: float = 1.0) -> "PrecisionFactor":
        """Factor ``U = scale * I``, i.e. ``P = scale^2 * I``."""
        return cls.from_matrix(scale * np.eye(dim))

    @property
    def matrix(self) -> FloatArray:
        """The materialized upper-triangular ``U``."""
        return unvech(self.u, self.dim)

    def with_u(self, u: ArrayLike) -> "PrecisionFactor":
        return PrecisionFactor(dim=self.dim, u=np.asarray(u, dtype=np.float64))


def precision_matrix(factor: PrecisionFactor) -> FloatArray:
    """``P = U^T U``, symmetric bit-for-bit."""
    U = factor.matrix
    P = U.T @ U
    return 0.5 * (P + P.T)


def _as_point(value: ArrayLike, dim: int, name: str) -> FloatArray:
    point = np.asarray(value, dtype=np.float64).reshape(-1)
    if point.size != dim:
        raise DimensionError(f"{name} has {point.size} entries, expected {dim}")
    return point


def mahalanobis_sq(x: ArrayLike, c: ArrayLike, factor: PrecisionFactor) -> float:
    """Squared Mahalanobis distance ``(x - c)^T P (x - c)``."""
    d = _as_point(x, factor.dim, "x") - _as_point(c, factor.dim, "c")
    projected = factor.matrix @ d
    return float(projected @ projected)


def gaussian_kernel(x: ArrayLike, c: ArrayLike, factor: PrecisionFactor) -> float:
    """``exp(-0.5 * (x - c)^T P (x - c))``."""
    return math.exp(-0.5 * mahalanobis_sq(x, c, factor))


class KernelTerms(NamedTuple):
    """Intermediate arrays shared by the forward pass and the gradients.

    ``diff[n, m] = x_n - c_m``, ``projected[n, m] = U (x_n - c_m)`` and
    ``phi[n, m]`` the kernel value.
    """

    diff: FloatArray
    projected: FloatArray
    phi: KernelMatrix


def _as_matrix(value: ArrayLike, dim: int, name: str) -> FloatArray:
    matrix = np.asarray(value, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix.reshape(1, -1)
    if matrix.ndim != 2 or matrix.shape[1] != dim:
        raise DimensionError(
            f"{name} must have {dim} columns, got shape {np.shape(value)}"
        )
    return matrix


def kernel_terms(X: ArrayLike, C: ArrayLike, factor: PrecisionFactor) -> KernelTerms:
    data = _as_matrix(X, factor.dim, "X")
    centers = _as_matrix(C, factor.dim, "C")
    diff = data[:, None, :] - centers[None, :, :]
    projected = diff @ factor.matrix.T
    sq = np.einsum("nmd,nmd->nm", projected, projected)
    return KernelTerms(diff=diff, projected=projected, phi=np.exp(-0.5 * sq))


def kernel_matrix(X: ArrayLike, C: ArrayLike, factor: PrecisionFactor) -> KernelMatrix:
    """``Phi[n, m] = gaussian_kernel(x_n, c_m)`` for every row pair."""
    return kernel_terms(X, C, factor).phi


def latent_factorized_kernel(
    z: ArrayLike, z_c: ArrayLike, gamma: ArrayLike
) -> float:
    """Kernel in eigen-coordinates: ``prod_d exp(-0.5 * gamma_d * (z_d - z_cd)^2)``.

    Equal to :func:`gaussian_kernel` when ``z = V^T x`` and ``z_c = V^T c`` for
    the eigenpairs ``(gamma, V)`` of ``P``.
    """
    eigenvalues = np.asarray(gamma, dtype=np.float64).reshape(-1)
    if np.any(eigenvalues < 0.0):
        raise ValueError("Eigenvalues must be nonnegative")
    delta = _as_point(z, eigenvalues.size, "z") - _as_point(
        z_c, eigenvalues.size, "z_c"
    )
    return float(np.prod(np.exp(-0.5 * eigenvalues * delta**2)))
