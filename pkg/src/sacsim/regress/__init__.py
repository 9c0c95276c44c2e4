"""Curvature regression model zoo: GPR kernels, SVR presets, KNN,
cross-validation, model selection and persistence."""

from .dataset import Dataset, dataset_from_csv, dataset_to_csv
from .kernels import (
    KERNEL_VARIANTS,
    Kernel,
    kernel_eval,
    kernel_matrix,
)
from .gpr import GPRModel, gpr_fit, gpr_predict, log_marginal_likelihood
from .knn import KNNModel, knn_fit, knn_predict
from .svm import ConstantModel, SVRModel, svr_fit, svr_predict
from .selection import (
    DEFAULT_MODEL_SPECS,
    GPRSpec,
    KNNSpec,
    SVRSpec,
    cross_validate,
    fit_model,
    format_selection_report,
    model_select,
    spec_from_key,
    train_test_split,
)
from .persist import load_model, save_model

__all__ = [
    "DEFAULT_MODEL_SPECS",
    "Dataset",
    "GPRModel",
    "GPRSpec",
    "KERNEL_VARIANTS",
    "KNNModel",
    "KNNSpec",
    "Kernel",
    "ConstantModel",
    "SVRModel",
    "SVRSpec",
    "cross_validate",
    "dataset_from_csv",
    "dataset_to_csv",
    "fit_model",
    "format_selection_report",
    "gpr_fit",
    "gpr_predict",
    "kernel_eval",
    "kernel_matrix",
    "knn_fit",
    "knn_predict",
    "load_model",
    "log_marginal_likelihood",
    "model_select",
    "save_model",
    "spec_from_key",
    "svr_fit",
    "svr_predict",
    "train_test_split",
]
