"""Stationary covariance kernels for Gaussian process regression.

All kernels are functions of the Euclidean distance r = ||x - x'||:

    squared_exponential   s2 * exp(-r^2 / (2 l^2))
    matern52              s2 * (1 + sqrt5 r/l + 5 r^2/(3 l^2)) exp(-sqrt5 r/l)
    exponential           s2 * exp(-r / l)
    rational_quadratic    s2 * (1 + r^2 / (2 a l^2))^(-a)

The rational quadratic tends to the squared exponential as a -> inf.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ..errors import ValidationError

KERNEL_VARIANTS = (
    "squared_exponential",
    "matern52",
    "exponential",
    "rational_quadratic",
)


@dataclass(frozen=True)
class Kernel:
    variant: str
    sigma2: float = 1.0  # signal variance
    length_scale: float = 1.0
    alpha: float = 1.0  # rational-quadratic shape, unused otherwise

    def __post_init__(self):
        if self.variant not in KERNEL_VARIANTS:
            raise ValidationError(
                f"unknown kernel variant {self.variant!r}; choose from {KERNEL_VARIANTS}"
            )
        if not (self.sigma2 > 0 and self.length_scale > 0 and self.alpha > 0):
            raise ValidationError("kernel hyperparameters must be positive")


def _apply(kernel: Kernel, r: np.ndarray) -> np.ndarray:
    s2, ell = kernel.sigma2, kernel.length_scale
    if kernel.variant == "squared_exponential":
        return s2 * np.exp(-0.5 * (r / ell) ** 2)
    if kernel.variant == "matern52":
        q = np.sqrt(5.0) * r / ell
        return s2 * (1.0 + q + q * q / 3.0) * np.exp(-q)
    if kernel.variant == "exponential":
        return s2 * np.exp(-r / ell)
    # rational_quadratic
    a = kernel.alpha
    return s2 * np.power(1.0 + (r * r) / (2.0 * a * ell * ell), -a)


def kernel_eval(kernel: Kernel, x: np.ndarray, y: np.ndarray) -> float:
    """Covariance between two feature vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError("kernel_eval needs two equal-length 1-D vectors")
    r = float(np.linalg.norm(x - y))
    return float(_apply(kernel, np.array(r)))


def kernel_matrix(kernel: Kernel, x: np.ndarray, y: np.ndarray | None = None) -> np.ndarray:
    """Gram matrix K[i, j] = k(x_i, y_j); symmetric PSD for y is None."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if y is None:
        r = cdist(x, x)
        # exact zeros on the diagonal guard against cdist roundoff
        np.fill_diagonal(r, 0.0)
    else:
        y = np.atleast_2d(np.asarray(y, dtype=float))
        if y.shape[1] != x.shape[1]:
            raise ValidationError("kernel_matrix dimension mismatch")
        r = cdist(x, y)
    return _apply(kernel, r)
