"""Gaussian process regression with a zero prior mean on standardized targets.

Targets are shifted/scaled to zero mean and unit variance before fitting
and transformed back on prediction, so far from the data the posterior
reverts to the training mean.  Features are used as-is: normalized
amplitudes are already dimensionless and O(1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.optimize import minimize

from ..errors import IllConditionedError, ValidationError
from .dataset import Dataset
from .kernels import Kernel, kernel_matrix

BASE_JITTER = 1e-10
_LOG_BOUNDS = {
    "sigma2": (np.log(1e-4), np.log(1e4)),
    "length_scale": (np.log(1e-3), np.log(1e2)),
    "alpha": (np.log(1e-2), np.log(1e3)),
}


@dataclass
class GPRModel:
    kernel: Kernel
    noise_var: float
    jitter: float
    x_train: np.ndarray
    y_train: np.ndarray
    y_mean: float
    y_scale: float
    chol: np.ndarray  # lower Cholesky factor of K + (noise_var + jitter) I
    alpha: np.ndarray  # (K + noise I)^-1 y_standardized

    def predict(self, x: np.ndarray) -> np.ndarray:
        """Posterior means for a (m, d) block of feature vectors."""
        k_star = kernel_matrix(self.kernel, np.atleast_2d(x), self.x_train)
        return self.y_mean + self.y_scale * (k_star @ self.alpha)

    def predict_with_variance(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = np.atleast_2d(x)
        k_star = kernel_matrix(self.kernel, x, self.x_train)
        mean = self.y_mean + self.y_scale * (k_star @ self.alpha)
        v = solve_triangular(self.chol, k_star.T, lower=True)
        prior = kernel_matrix(self.kernel, x).diagonal()
        var = (prior - np.sum(v * v, axis=0)) * self.y_scale**2
        return mean, np.maximum(var, 0.0)


def _standardize(y: np.ndarray) -> tuple[np.ndarray, float, float]:
    mean = float(np.mean(y))
    scale = float(np.std(y))
    if scale < 1e-12:
        scale = 1.0
    return (y - mean) / scale, mean, scale


def _factorize(kernel: Kernel, x: np.ndarray, noise_var: float):
    """Cholesky of K + (noise + jitter) I with escalating jitter."""
    k = kernel_matrix(kernel, x)
    jitter = BASE_JITTER
    while jitter <= 1e-2:
        try:
            chol = np.linalg.cholesky(k + (noise_var + jitter) * np.eye(len(x)))
            return chol, jitter
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise IllConditionedError(
        "kernel matrix not positive definite even after jitter escalation"
    )


def _lml(kernel: Kernel, x: np.ndarray, y_std: np.ndarray, noise_var: float) -> float:
    chol, _ = _factorize(kernel, x, noise_var)
    alpha = solve_triangular(
        chol.T, solve_triangular(chol, y_std, lower=True), lower=False
    )
    n = len(y_std)
    return float(
        -0.5 * y_std @ alpha - np.sum(np.log(np.diag(chol))) - 0.5 * n * np.log(2 * np.pi)
    )


def log_marginal_likelihood(data: Dataset, kernel: Kernel, noise_var: float = 0.0) -> float:
    """LML of the standardized targets under the given kernel."""
    y_std, _, _ = _standardize(data.curvatures)
    return _lml(kernel, data.features, y_std, noise_var)


def _optimize_kernel(
    kernel: Kernel,
    x: np.ndarray,
    y_std: np.ndarray,
    noise_var: float,
    n_starts: int,
    seed: int,
    maxiter: int,
) -> Kernel:
    """Multi-start Nelder-Mead ascent of the LML in log hyperparameter space."""
    names = ["sigma2", "length_scale"]
    if kernel.variant == "rational_quadratic":
        names.append("alpha")
    bounds = [_LOG_BOUNDS[n] for n in names]
    x0 = np.log([getattr(kernel, n) for n in names])
    x0 = np.clip(x0, [b[0] for b in bounds], [b[1] for b in bounds])

    def neg_lml(log_params):
        params = dict(zip(names, np.exp(log_params)))
        try:
            return -_lml(Kernel(kernel.variant, **params), x, y_std, noise_var)
        except IllConditionedError:
            return 1e12

    rng = np.random.default_rng(seed)
    starts = [x0] + [
        np.array([rng.uniform(lo, hi) for lo, hi in bounds]) for _ in range(n_starts - 1)
    ]
    best = None
    for start in starts:
        res = minimize(
            neg_lml, start, method="Nelder-Mead", bounds=bounds,
            options={"maxiter": maxiter, "xatol": 1e-3, "fatol": 1e-6},
        )
        if best is None or res.fun < best.fun:
            best = res
    params = dict(zip(names, np.exp(best.x)))
    return Kernel(kernel.variant, **params)


def gpr_fit(
    data: Dataset,
    kernel: Kernel,
    noise_var: float = 0.0,
    optimize: bool = False,
    n_starts: int = 5,
    seed: int = 0,
    nm_maxiter: int = 200,
) -> GPRModel:
    """Fit a GP regressor; optionally tune hyperparameters by max LML."""
    if noise_var < 0:
        raise ValidationError("noise_var must be >= 0")
    x = data.features
    y_std, y_mean, y_scale = _standardize(data.curvatures)
    if optimize:
        kernel = _optimize_kernel(kernel, x, y_std, noise_var, n_starts, seed, nm_maxiter)
    chol, jitter = _factorize(kernel, x, noise_var)
    alpha = solve_triangular(
        chol.T, solve_triangular(chol, y_std, lower=True), lower=False
    )
    return GPRModel(
        kernel=kernel,
        noise_var=float(noise_var),
        jitter=float(jitter),
        x_train=x,
        y_train=data.curvatures,
        y_mean=y_mean,
        y_scale=y_scale,
        chol=chol,
        alpha=alpha,
    )


def gpr_predict(model: GPRModel, x: np.ndarray) -> tuple[float, float]:
    """Posterior (mean, variance) at a single feature vector."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != model.x_train.shape[1]:
        raise ValidationError(
            f"feature dimension mismatch: expected {model.x_train.shape[1]}, got {x.shape}"
        )
    mean, var = model.predict_with_variance(x[None, :])
    return float(mean[0]), float(var[0])
