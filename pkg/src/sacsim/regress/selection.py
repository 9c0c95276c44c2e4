"""Model specs, k-fold cross-validation and validation-RMSE model selection.

The default candidate zoo holds seven specs: four GPR kernel variants, two
Gaussian SVR presets and nearest-neighbor regression.  Cross-validation
shuffles deterministically under a seed and stratifies folds by curvature
label so every fold sees every training curvature when counts allow.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.spatial.distance import pdist

from ..errors import ValidationError
from .dataset import Dataset
from .gpr import gpr_fit
from .kernels import Kernel
from .knn import knn_fit
from .svm import svr_fit


@dataclass(frozen=True)
class GPRSpec:
    variant: str
    sigma2: float = 1.0
    length_scale: float | None = None  # None -> median pairwise distance
    alpha: float = 1.0
    noise_var: float = 1e-4
    optimize: bool = False

    @property
    def name(self) -> str:
        return {
            "squared_exponential": "Squared Exponential GPR",
            "matern52": "Matern 5/2 GPR",
            "exponential": "Exponential GPR",
            "rational_quadratic": "Rational Quadratic GPR",
        }[self.variant]

    @property
    def key(self) -> str:
        return {
            "squared_exponential": "gpr-se",
            "matern52": "gpr-matern52",
            "exponential": "gpr-exp",
            "rational_quadratic": "gpr-rq",
        }[self.variant]

    @property
    def family(self) -> str:
        return "Gaussian Process Regression"


@dataclass(frozen=True)
class SVRSpec:
    preset: str = "medium"
    c: float | None = None
    epsilon: float | None = None

    @property
    def name(self) -> str:
        return f"{self.preset.capitalize()} Gaussian SVM"

    @property
    def key(self) -> str:
        return f"svr-{self.preset}"

    @property
    def family(self) -> str:
        return "Support Vector Machine"


@dataclass(frozen=True)
class KNNSpec:
    k: int = 1

    @property
    def name(self) -> str:
        return "Nearest NN"

    @property
    def key(self) -> str:
        return "knn"

    @property
    def family(self) -> str:
        return "Nearest Neighbors"


ModelSpec = GPRSpec | SVRSpec | KNNSpec

DEFAULT_MODEL_SPECS: tuple[ModelSpec, ...] = (
    GPRSpec("rational_quadratic"),
    GPRSpec("exponential"),
    GPRSpec("matern52"),
    GPRSpec("squared_exponential"),
    KNNSpec(k=1),
    SVRSpec("medium"),
    SVRSpec("coarse"),
)

_KEY_TO_SPEC = {spec.key: spec for spec in DEFAULT_MODEL_SPECS}


def spec_from_key(key: str) -> ModelSpec:
    try:
        return _KEY_TO_SPEC[key]
    except KeyError:
        raise ValidationError(
            f"unknown model key {key!r}; choose from {sorted(_KEY_TO_SPEC)}"
        ) from None


def median_length_scale(features: np.ndarray, max_rows: int = 256) -> float:
    """Median pairwise Euclidean distance, the usual length-scale heuristic."""
    x = np.asarray(features, dtype=float)
    if x.shape[0] > max_rows:
        idx = np.linspace(0, x.shape[0] - 1, max_rows).astype(int)
        x = x[idx]
    if x.shape[0] < 2:
        return 1.0
    d = pdist(x)
    med = float(np.median(d[d > 0])) if np.any(d > 0) else 0.0
    return med if med > 0 else 1.0


def fit_model(spec: ModelSpec, data: Dataset):
    """Train the model described by spec on the dataset."""
    if isinstance(spec, GPRSpec):
        ell = spec.length_scale
        if ell is None:
            ell = median_length_scale(data.features)
        kernel = Kernel(spec.variant, sigma2=spec.sigma2, length_scale=ell, alpha=spec.alpha)
        return gpr_fit(data, kernel, noise_var=spec.noise_var, optimize=spec.optimize)
    if isinstance(spec, SVRSpec):
        return svr_fit(data, preset=spec.preset, c=spec.c, epsilon=spec.epsilon)
    if isinstance(spec, KNNSpec):
        return knn_fit(data, k=min(spec.k, len(data)))
    raise ValidationError(f"unsupported model spec {spec!r}")


def _stratified_order(data: Dataset, rng: np.random.Generator) -> np.ndarray:
    """Row order grouping shuffled rows by curvature label."""
    order = []
    for value in np.unique(data.curvatures):
        idx = np.flatnonzero(data.curvatures == value)
        order.append(rng.permutation(idx))
    return np.concatenate(order)


def _fold_assignment(data: Dataset, folds: int, rng: np.random.Generator) -> np.ndarray:
    order = _stratified_order(data, rng)
    assignment = np.empty(len(data), dtype=int)
    assignment[order] = np.arange(len(data)) % folds
    return assignment


def cross_validate(data: Dataset, spec: ModelSpec, folds: int = 10, seed: int = 0) -> float:
    """Pooled held-out RMSE over a deterministic stratified k-fold split."""
    if folds < 2:
        raise ValidationError("folds must be >= 2")
    if len(data) < folds:
        raise ValidationError(f"dataset of {len(data)} rows cannot fill {folds} folds")
    rng = np.random.default_rng(seed)
    assignment = _fold_assignment(data, folds, rng)
    sq_errors = np.empty(len(data))
    for fold in range(folds):
        held = assignment == fold
        model = fit_model(spec, data.subset(~held))
        pred = model.predict(data.features[held])
        sq_errors[held] = (pred - data.curvatures[held]) ** 2
    return float(np.sqrt(np.mean(sq_errors)))


@dataclass(frozen=True)
class SelectionResult:
    spec: ModelSpec
    rmse: float

    @property
    def name(self) -> str:
        return self.spec.name


def model_select(
    data: Dataset,
    candidates: Sequence[ModelSpec] | None = None,
    folds: int = 10,
    seed: int = 0,
) -> list[SelectionResult]:
    """Rank candidate specs by cross-validated RMSE, best first."""
    candidates = list(candidates) if candidates is not None else list(DEFAULT_MODEL_SPECS)
    if not candidates:
        raise ValidationError("model_select needs at least one candidate")
    results = [
        SelectionResult(spec, cross_validate(data, spec, folds=folds, seed=seed))
        for spec in candidates
    ]
    return sorted(results, key=lambda r: r.rmse)


def format_selection_report(results: Sequence[SelectionResult]) -> str:
    """Text table of the ranked model comparison (validation RMSE, 1/m)."""
    width = max(len(r.name) for r in results)
    fam_w = max(len(r.spec.family) for r in results)
    lines = [
        f"{'Family':<{fam_w}}  {'Model':<{width}}  RMSE (1/m)",
        "-" * (fam_w + width + 14),
    ]
    for r in results:
        lines.append(f"{r.spec.family:<{fam_w}}  {r.name:<{width}}  {r.rmse:10.4f}")
    return "\n".join(lines)


def train_test_split(
    data: Dataset, test_fraction: float = 0.1, seed: int = 0
) -> tuple[Dataset, Dataset]:
    """Deterministic stratified split; returns (train, test)."""
    if not (0.0 < test_fraction < 1.0):
        raise ValidationError("test_fraction must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    test_idx = []
    for value in np.unique(data.curvatures):
        idx = rng.permutation(np.flatnonzero(data.curvatures == value))
        n_test = int(round(test_fraction * idx.size))
        test_idx.extend(idx[:n_test])
    test_mask = np.zeros(len(data), dtype=bool)
    test_mask[np.array(test_idx, dtype=int)] = True
    if not test_mask.any() or test_mask.all():
        raise ValidationError("split produced an empty partition; adjust test_fraction")
    return data.subset(~test_mask), data.subset(test_mask)
