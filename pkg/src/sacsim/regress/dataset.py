"""Feature/curvature dataset container and its CSV form.

CSV schema (header mandatory): ``kappa,f200,f400,...`` with one column per
tone frequency and curvature in 1/m.  Floats are written with full
round-trip precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataFormatError, ValidationError

KAPPA_MIN = 0.0
KAPPA_MAX = 60.0


@dataclass(frozen=True)
class Dataset:
    """Rows of (feature vector, curvature)."""

    features: np.ndarray  # (n, d) normalized per-tone amplitudes
    curvatures: np.ndarray  # (n,) targets, 1/m
    feature_names: tuple[str, ...] | None = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        kappas = np.asarray(self.curvatures, dtype=float)
        if feats.ndim != 2 or feats.shape[0] == 0:
            raise ValidationError("features must be a non-empty (n, d) array")
        if kappas.shape != (feats.shape[0],):
            raise ValidationError("curvatures must align with feature rows")
        if not (np.all(np.isfinite(feats)) and np.all(np.isfinite(kappas))):
            raise ValidationError("dataset entries must be finite")
        if np.any(kappas < KAPPA_MIN - 1e-9) or np.any(kappas > KAPPA_MAX + 1e-9):
            raise ValidationError(
                f"curvatures must lie in [{KAPPA_MIN:g}, {KAPPA_MAX:g}] 1/m"
            )
        if self.feature_names is not None:
            names = tuple(str(n) for n in self.feature_names)
            if len(names) != feats.shape[1]:
                raise ValidationError("feature_names must match feature dimension")
            object.__setattr__(self, "feature_names", names)
        feats = feats.copy()
        kappas = kappas.copy()
        feats.setflags(write=False)
        kappas.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "curvatures", kappas)

    def __len__(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    def subset(self, idx) -> "Dataset":
        return Dataset(self.features[idx], self.curvatures[idx], self.feature_names)


def default_feature_names(frequencies) -> tuple[str, ...]:
    return tuple(f"f{f:g}" for f in frequencies)


def dataset_to_csv(path, data: Dataset) -> None:
    names = data.feature_names or tuple(f"x{i}" for i in range(data.dim))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("kappa," + ",".join(names) + "\n")
        for k, row in zip(data.curvatures, data.features):
            fh.write(repr(float(k)) + "," + ",".join(repr(float(v)) for v in row) + "\n")


def dataset_from_csv(path) -> Dataset:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read dataset {path}: {exc}") from exc
    if not lines:
        raise DataFormatError(f"dataset {path} is empty")
    header = lines[0].split(",")
    if header[0] != "kappa" or len(header) < 2:
        raise DataFormatError(
            f"dataset {path} must start with header 'kappa,<feature names>'"
        )
    names = tuple(header[1:])
    kappas = []
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise DataFormatError(
                f"{path}:{lineno}: expected {len(header)} fields, got {len(parts)}"
            )
        try:
            values = [float(p) for p in parts]
        except ValueError as exc:
            raise DataFormatError(f"{path}:{lineno}: {exc}") from exc
        kappas.append(values[0])
        rows.append(values[1:])
    if not rows:
        raise DataFormatError(f"dataset {path} has a header but no rows")
    try:
        return Dataset(np.array(rows), np.array(kappas), feature_names=names)
    except ValidationError as exc:
        raise DataFormatError(f"dataset {path}: {exc}") from exc
