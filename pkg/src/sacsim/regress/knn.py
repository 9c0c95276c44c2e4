"""k-nearest-neighbor regression on z-scored features.

Prediction is the mean target of the k Euclidean-nearest training rows;
distance ties are broken by training-row order (stable sort).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .dataset import Dataset


@dataclass
class KNNModel:
    k: int
    x_mean: np.ndarray
    x_scale: np.ndarray
    z_train: np.ndarray  # standardized training features
    y_train: np.ndarray

    def predict(self, x: np.ndarray) -> np.ndarray:
        z = (np.atleast_2d(x) - self.x_mean) / self.x_scale
        d2 = (
            np.sum(z * z, axis=1)[:, None]
            - 2.0 * z @ self.z_train.T
            + np.sum(self.z_train**2, axis=1)[None, :]
        )
        order = np.argsort(d2, axis=1, kind="stable")[:, : self.k]
        return self.y_train[order].mean(axis=1)


def knn_fit(data: Dataset, k: int = 1, standardize: bool = True) -> KNNModel:
    if not (1 <= k <= len(data)):
        raise ValidationError(f"k must lie in [1, {len(data)}], got {k}")
    if standardize:
        x_mean = data.features.mean(axis=0)
        x_scale = data.features.std(axis=0)
        x_scale = np.where(x_scale < 1e-12, 1.0, x_scale)
    else:
        x_mean = np.zeros(data.dim)
        x_scale = np.ones(data.dim)
    return KNNModel(
        k=int(k),
        x_mean=x_mean,
        x_scale=x_scale,
        z_train=(data.features - x_mean) / x_scale,
        y_train=data.curvatures.copy(),
    )


def knn_predict(model: KNNModel, x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValidationError("knn_predict expects a single feature vector")
    return float(model.predict(x[None, :])[0])
