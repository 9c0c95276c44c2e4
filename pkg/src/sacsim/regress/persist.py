"""Versioned JSON persistence for trained models.

GPR files store the kernel spec, noise variance and training data; loading
re-runs the deterministic factorization, so a round trip reproduces
predictions bitwise on the same platform.  SVR and KNN files carry the
fitted prediction state directly.  Floats survive exactly via repr-style
JSON encoding.
"""

from __future__ import annotations

import json

import numpy as np

from ..errors import DataFormatError
from .dataset import Dataset
from .gpr import GPRModel, gpr_fit
from .kernels import Kernel
from .knn import KNNModel
from .svm import ConstantModel, SVRModel

FORMAT = "sacsim-model"
VERSION = 1


def _arr(a) -> list:
    return np.asarray(a, dtype=float).tolist()


def save_model(path, model) -> None:
    if isinstance(model, GPRModel):
        payload = {
            "type": "gpr",
            "kernel": {
                "variant": model.kernel.variant,
                "sigma2": model.kernel.sigma2,
                "length_scale": model.kernel.length_scale,
                "alpha": model.kernel.alpha,
            },
            "noise_var": model.noise_var,
            "x_train": _arr(model.x_train),
            "y_train": _arr(model.y_train),
        }
    elif isinstance(model, SVRModel):
        payload = {
            "type": "svr",
            "preset": model.preset,
            "kernel_scale": model.kernel_scale,
            "gamma": model.gamma,
            "c": model.c,
            "epsilon": model.epsilon,
            "x_mean": _arr(model.x_mean),
            "x_scale": _arr(model.x_scale),
            "support_vectors": _arr(model.support_vectors),
            "dual_coef": _arr(model.dual_coef),
            "intercept": model.intercept,
        }
    elif isinstance(model, KNNModel):
        payload = {
            "type": "knn",
            "k": model.k,
            "x_mean": _arr(model.x_mean),
            "x_scale": _arr(model.x_scale),
            "z_train": _arr(model.z_train),
            "y_train": _arr(model.y_train),
        }
    elif isinstance(model, ConstantModel):
        payload = {"type": "constant", "value": model.value}
    else:
        raise DataFormatError(f"cannot serialize model of type {type(model).__name__}")
    payload = {"format": FORMAT, "version": VERSION, **payload}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)


def load_model(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataFormatError(f"cannot read model file {path}: {exc}") from exc
    if payload.get("format") != FORMAT:
        raise DataFormatError(f"{path} is not a {FORMAT} file")
    if payload.get("version") != VERSION:
        raise DataFormatError(
            f"unsupported model file version {payload.get('version')} in {path}"
        )
    kind = payload.get("type")
    try:
        if kind == "gpr":
            kernel = Kernel(**payload["kernel"])
            data = Dataset(np.array(payload["x_train"]), np.array(payload["y_train"]))
            return gpr_fit(data, kernel, noise_var=payload["noise_var"], optimize=False)
        if kind == "svr":
            return SVRModel(
                preset=payload["preset"],
                kernel_scale=payload["kernel_scale"],
                gamma=payload["gamma"],
                c=payload["c"],
                epsilon=payload["epsilon"],
                x_mean=np.array(payload["x_mean"]),
                x_scale=np.array(payload["x_scale"]),
                support_vectors=np.array(payload["support_vectors"]),
                dual_coef=np.array(payload["dual_coef"]),
                intercept=payload["intercept"],
            )
        if kind == "knn":
            return KNNModel(
                k=payload["k"],
                x_mean=np.array(payload["x_mean"]),
                x_scale=np.array(payload["x_scale"]),
                z_train=np.array(payload["z_train"]),
                y_train=np.array(payload["y_train"]),
            )
        if kind == "constant":
            return ConstantModel(value=payload["value"])
    except KeyError as exc:
        raise DataFormatError(f"model file {path} is missing field {exc}") from exc
    raise DataFormatError(f"unknown model type {kind!r} in {path}")
