"""Epsilon-insensitive support vector regression with Gaussian-kernel presets.

The dual problem is solved by libsvm's SMO (via scikit-learn); the fitted
support vectors, dual coefficients and intercept are extracted into a
self-contained model so prediction and persistence do not depend on the
solver.  Preset kernel scales follow the usual tool convention for
d-dimensional inputs: sqrt(d) ("medium") and 4 sqrt(d) ("coarse"), applied
after per-dimension z-scoring of the features (scaling can be disabled for
equivalence experiments).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.svm import SVR as _SkSVR

from ..errors import ValidationError
from .dataset import Dataset

PRESETS = ("medium", "coarse")


@dataclass
class ConstantModel:
    """Fallback predictor for degenerate (constant-target) training data."""

    value: float

    def predict(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(x)
        return np.full(x.shape[0], self.value)


@dataclass
class SVRModel:
    preset: str
    kernel_scale: float
    gamma: float
    c: float
    epsilon: float
    x_mean: np.ndarray
    x_scale: np.ndarray
    support_vectors: np.ndarray  # in standardized feature space
    dual_coef: np.ndarray
    intercept: float

    def predict(self, x: np.ndarray) -> np.ndarray:
        z = (np.atleast_2d(x) - self.x_mean) / self.x_scale
        d2 = (
            np.sum(z * z, axis=1)[:, None]
            - 2.0 * z @ self.support_vectors.T
            + np.sum(self.support_vectors**2, axis=1)[None, :]
        )
        k = np.exp(-self.gamma * np.maximum(d2, 0.0))
        return k @ self.dual_coef + self.intercept


def preset_kernel_scale(preset: str, dim: int) -> float:
    if preset not in PRESETS:
        raise ValidationError(f"unknown SVR preset {preset!r}; choose from {PRESETS}")
    scale = float(np.sqrt(dim))
    return scale if preset == "medium" else 4.0 * scale


def _default_c_epsilon(y: np.ndarray) -> tuple[float, float]:
    # Interquartile-range heuristics in the style of common tool presets.
    iqr = float(np.subtract(*np.percentile(y, [75, 25])))
    spread = iqr if iqr > 0 else float(np.std(y))
    if spread <= 0:
        return 1.0, 0.1
    return spread / 1.349, spread / 13.49


def svr_fit(
    data: Dataset,
    preset: str = "medium",
    c: float | None = None,
    epsilon: float | None = None,
    standardize: bool = True,
    tol: float = 1e-6,
):
    """Fit an RBF epsilon-SVR; returns SVRModel or ConstantModel."""
    if len(data) < 2:
        raise ValidationError("svr_fit needs at least 2 rows")
    y = data.curvatures
    if float(np.ptp(y)) == 0.0:
        return ConstantModel(value=float(y[0]))

    if standardize:
        x_mean = data.features.mean(axis=0)
        x_scale = data.features.std(axis=0)
        x_scale = np.where(x_scale < 1e-12, 1.0, x_scale)
    else:
        x_mean = np.zeros(data.dim)
        x_scale = np.ones(data.dim)
    z = (data.features - x_mean) / x_scale

    c_def, eps_def = _default_c_epsilon(y)
    c_val = float(c) if c is not None else c_def
    eps_val = float(epsilon) if epsilon is not None else eps_def
    scale = preset_kernel_scale(preset, data.dim)
    gamma = 1.0 / (2.0 * scale * scale)

    sk = _SkSVR(kernel="rbf", gamma=gamma, C=c_val, epsilon=eps_val, tol=tol)
    sk.fit(z, y)
    return SVRModel(
        preset=preset,
        kernel_scale=scale,
        gamma=gamma,
        c=c_val,
        epsilon=eps_val,
        x_mean=x_mean,
        x_scale=x_scale,
        support_vectors=sk.support_vectors_.copy(),
        dual_coef=sk.dual_coef_.ravel().copy(),
        intercept=float(sk.intercept_[0]),
    )


def svr_predict(model, x: np.ndarray) -> float:
    """Curvature prediction at a single feature vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValidationError("svr_predict expects a single feature vector")
    return float(model.predict(x[None, :])[0])
