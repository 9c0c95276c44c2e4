"""End-to-end sensing pipeline: curvature -> channel geometry -> tone
attenuation -> FFT features -> regression datasets and error reports.

Dataset generation follows the bench protocol: a grid of training
curvatures (default 0..60 in steps of 5), a fixed number of noisy samples
per curvature, and per-tone amplitudes normalized by the straight-channel
reference.  Channel solutions are computed once per curvature and shared
across samples; only the acoustic jitter varies.

Evaluation mirrors the bench test layout: a grid of test curvatures
interleaving the training grid (sharing only the 0 and 60 endpoints),
a handful of repetitions per curvature, and per-curvature min/avg/max
absolute error rows.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .acoustics import (
    AttenuationParams,
    Signal,
    ToneSet,
    attenuation_gains,
    default_tone_set,
    fft_amplitudes,
    normalize,
    synth_signal,
)
from .channelsim import ChannelConfig, ChannelSolution, SolverOptions, min_height, sweep_channel
from .errors import DataFormatError, ValidationError
from .regress import Dataset
from .regress.dataset import default_feature_names
from .wavio import read_wav, write_wav

__all__ = [
    "ErrorReport",
    "ProtocolSpec",
    "TEST_CURVATURES",
    "check_grid_disjointness",
    "emit_wav_corpus",
    "evaluate",
    "format_error_table",
    "generate_dataset",
    "ingest_recordings",
    "noise_robustness",
    "reference_amplitudes",
    "solve_heights",
    "write_error_report_csv",
    "write_scatter_csv",
]

# Test objects interleave the training grid, sharing only the endpoints.
TEST_CURVATURES = (
    0.0, 2.5, 7.5, 12.5, 17.5, 22.5, 27.5, 32.5, 37.5, 42.5, 47.5, 52.5, 57.5, 60.0,
)


@dataclass(frozen=True)
class ProtocolSpec:
    """Data-collection protocol for training-set generation."""

    training_curvatures: tuple[float, ...] = tuple(float(k) for k in range(0, 61, 5))
    samples_per_curvature: int = 50
    noise_pct: float = 0.03
    tones: ToneSet = field(default_factory=default_tone_set)
    seed: int = 0
    duration: float = 1.0
    sample_rate: float = 44100.0

    def __post_init__(self):
        if not self.training_curvatures:
            raise ValidationError("training_curvatures must be non-empty")
        if any(not (0.0 <= k <= 60.0) for k in self.training_curvatures):
            raise ValidationError("training curvatures must lie in [0, 60]")
        if self.samples_per_curvature < 1:
            raise ValidationError("samples_per_curvature must be >= 1")
        if self.noise_pct < 0:
            raise ValidationError("noise_pct must be >= 0")


def solve_heights(
    kappas: Sequence[float],
    channel: ChannelConfig,
    opts: SolverOptions | None = None,
) -> dict[float, float]:
    """Minimum channel height per curvature, one BVP solve per kappa."""
    kappas = sorted({float(k) for k in kappas})
    sols = sweep_channel(kappas, channel, opts)
    return {sol.kappa: min_height(sol) for sol in sols}


def reference_amplitudes(spec: ProtocolSpec) -> np.ndarray:
    """Per-tone amplitudes of the noiseless straight-channel recording."""
    sig = synth_signal(
        spec.tones,
        gains=np.ones(len(spec.tones)),
        duration=spec.duration,
        sample_rate=spec.sample_rate,
        noise_pct=0.0,
    )
    return fft_amplitudes(sig, spec.tones)


def _check_attenuation_anchor(channel: ChannelConfig, atten: AttenuationParams) -> None:
    if abs(atten.reference_height - channel.h0) > 1e-12:
        raise ValidationError(
            "attenuation reference_height must equal the channel's h0 "
            f"({atten.reference_height:g} != {channel.h0:g})"
        )


def _sample_rows(
    spec: ProtocolSpec,
    gains_by_kappa: dict[float, np.ndarray],
    rng: np.random.Generator,
):
    """Yield (kappa, Signal) for every sample of the generation protocol."""
    for kappa in spec.training_curvatures:
        gains = gains_by_kappa[float(kappa)]
        for _ in range(spec.samples_per_curvature):
            yield kappa, synth_signal(
                spec.tones,
                gains=gains,
                duration=spec.duration,
                sample_rate=spec.sample_rate,
                noise_pct=spec.noise_pct,
                rng=rng,
            )


def _gains_by_kappa(
    kappas: Sequence[float],
    channel: ChannelConfig,
    atten: AttenuationParams,
    solver_opts: SolverOptions | None,
    heights: dict[float, float] | None,
) -> dict[float, np.ndarray]:
    if heights is None:
        heights = solve_heights(kappas, channel, solver_opts)
    return {
        float(k): attenuation_gains(float(k), heights[float(k)], atten)
        for k in kappas
    }


def generate_dataset(
    spec: ProtocolSpec,
    channel: ChannelConfig,
    atten: AttenuationParams,
    solver_opts: SolverOptions | None = None,
    heights: dict[float, float] | None = None,
) -> Dataset:
    """Synthesize the training dataset for the given protocol.

    Deterministic under spec.seed; the channel is solved once per training
    curvature and acoustic jitter alone distinguishes repeated samples.
    """
    _check_attenuation_anchor(channel, atten)
    gains = _gains_by_kappa(spec.training_curvatures, channel, atten, solver_opts, heights)
    ref = reference_amplitudes(spec)
    rng = np.random.default_rng(spec.seed)
    feats = []
    kappas = []
    for kappa, sig in _sample_rows(spec, gains, rng):
        feats.append(normalize(fft_amplitudes(sig, spec.tones), ref))
        kappas.append(kappa)
    return Dataset(
        np.array(feats),
        np.array(kappas),
        feature_names=default_feature_names(spec.tones.frequencies),
    )


def emit_wav_corpus(
    out_dir,
    spec: ProtocolSpec,
    channel: ChannelConfig,
    atten: AttenuationParams,
    solver_opts: SolverOptions | None = None,
    heights: dict[float, float] | None = None,
) -> str:
    """Write the generation protocol as WAV files plus a manifest CSV.

    The first manifest row is a noiseless straight-channel recording that
    serves as the normalization reference on ingestion.  Returns the
    manifest path.  With the same seed, ingest_recordings() reproduces
    generate_dataset() to within float32 quantization.
    """
    _check_attenuation_anchor(channel, atten)
    os.makedirs(out_dir, exist_ok=True)
    gains = _gains_by_kappa(spec.training_curvatures, channel, atten, solver_opts, heights)
    rng = np.random.default_rng(spec.seed)

    manifest_path = os.path.join(out_dir, "manifest.csv")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write("path,kappa_per_m\n")
        ref_sig = synth_signal(
            spec.tones,
            gains=np.ones(len(spec.tones)),
            duration=spec.duration,
            sample_rate=spec.sample_rate,
            noise_pct=0.0,
        )
        write_wav(os.path.join(out_dir, "reference.wav"), ref_sig)
        fh.write("reference.wav,0.0\n")
        for i, (kappa, sig) in enumerate(_sample_rows(spec, gains, rng)):
            name = f"sample_{i:05d}.wav"
            write_wav(os.path.join(out_dir, name), sig)
            fh.write(f"{name},{repr(float(kappa))}\n")
    return manifest_path


def ingest_recordings(manifest_path, tones: ToneSet | None = None) -> Dataset:
    """Build a dataset from recorded WAV files listed in a manifest.

    Manifest schema: ``path,kappa_per_m`` with paths relative to the
    manifest's directory.  The first kappa = 0 row is the designated
    normalization reference; it calibrates the amplitude scale and is not
    returned as a data row.
    """
    tones = tones or default_tone_set()
    try:
        with open(manifest_path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DataFormatError(f"cannot read manifest {manifest_path}: {exc}") from exc
    if not lines or lines[0].split(",")[:2] != ["path", "kappa_per_m"]:
        raise DataFormatError(
            f"manifest {manifest_path} must start with header 'path,kappa_per_m'"
        )
    entries = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise DataFormatError(
                f"{manifest_path}:{lineno}: expected 'path,kappa_per_m'"
            )
        try:
            kappa = float(parts[1])
        except ValueError as exc:
            raise DataFormatError(f"{manifest_path}:{lineno}: {exc}") from exc
        if not (0.0 <= kappa <= 60.0):
            raise DataFormatError(
                f"{manifest_path}:{lineno}: curvature {kappa:g} outside [0, 60]"
            )
        entries.append((parts[0], kappa))
    if not entries:
        raise DataFormatError(f"manifest {manifest_path} lists no recordings")

    base = os.path.dirname(os.path.abspath(manifest_path))
    ref_idx = next((i for i, (_, k) in enumerate(entries) if k == 0.0), None)
    if ref_idx is None:
        raise DataFormatError(
            f"manifest {manifest_path} has no kappa = 0 reference recording"
        )
    ref_amps = fft_amplitudes(read_wav(os.path.join(base, entries[ref_idx][0])), tones)
    feats = []
    kappas = []
    for i, (rel_path, kappa) in enumerate(entries):
        if i == ref_idx:
            continue
        sig = read_wav(os.path.join(base, rel_path))
        feats.append(normalize(fft_amplitudes(sig, tones), ref_amps))
        kappas.append(kappa)
    if not feats:
        raise DataFormatError(
            f"manifest {manifest_path} holds only the reference recording"
        )
    return Dataset(
        np.array(feats),
        np.array(kappas),
        feature_names=default_feature_names(tones.frequencies),
    )


@dataclass(frozen=True)
class ErrorReport:
    """Per-curvature absolute-error summary over repeated predictions."""

    rows: tuple[tuple[float, float, float, float], ...]  # kappa, min, avg, max
    global_max: float
    pairs: np.ndarray  # (n, 2) actual vs predicted

    def __post_init__(self):
        for kappa, lo, avg, hi in self.rows:
            if not (0.0 <= lo <= avg <= hi):
                raise ValidationError(
                    f"error row for kappa={kappa:g} violates min <= avg <= max"
                )


def check_grid_disjointness(
    training: Sequence[float], test: Sequence[float], shared=(0.0, 60.0)
) -> None:
    """Training and test grids may only share the envelope endpoints."""
    overlap = set(map(float, training)) & set(map(float, test))
    illegal = overlap - set(map(float, shared))
    if illegal:
        raise ValidationError(
            f"test curvatures duplicate training values: {sorted(illegal)}"
        )


def evaluate(
    model,
    channel: ChannelConfig,
    atten: AttenuationParams,
    tones: ToneSet | None = None,
    test_curvatures: Sequence[float] = TEST_CURVATURES,
    repetitions: int = 5,
    noise_pct: float = 0.03,
    seed: int = 1,
    duration: float = 1.0,
    sample_rate: float = 44100.0,
    solver_opts: SolverOptions | None = None,
    heights: dict[float, float] | None = None,
    training_curvatures: Sequence[float] | None = None,
) -> ErrorReport:
    """Per-curvature min/avg/max absolute prediction error.

    When training_curvatures is given, the test grid is checked against it
    (only the 0 and 60 endpoints may coincide).
    """
    if repetitions < 1:
        raise ValidationError("repetitions must be >= 1")
    if training_curvatures is not None:
        check_grid_disjointness(training_curvatures, test_curvatures)
    tones = tones or default_tone_set()
    spec = ProtocolSpec(
        training_curvatures=tuple(float(k) for k in test_curvatures),
        samples_per_curvature=1,
        noise_pct=noise_pct,
        tones=tones,
        seed=seed,
        duration=duration,
        sample_rate=sample_rate,
    )
    gains = _gains_by_kappa(test_curvatures, channel, atten, solver_opts, heights)
    ref = reference_amplitudes(spec)
    rng = np.random.default_rng(seed)

    rows = []
    pairs = []
    for kappa in test_curvatures:
        errors = []
        for _ in range(repetitions):
            sig = synth_signal(
                tones, gains[float(kappa)], duration, sample_rate, noise_pct, rng
            )
            feat = normalize(fft_amplitudes(sig, tones), ref)
            pred = float(model.predict(feat[None, :])[0])
            pairs.append((float(kappa), pred))
            errors.append(abs(pred - float(kappa)))
        errors = np.array(errors)
        rows.append(
            (float(kappa), float(errors.min()), float(errors.mean()), float(errors.max()))
        )
    return ErrorReport(
        rows=tuple(rows),
        global_max=float(max(r[3] for r in rows)),
        pairs=np.array(pairs),
    )


def noise_robustness(
    model,
    channel: ChannelConfig,
    atten: AttenuationParams,
    snr_levels_db: Sequence[float],
    tones: ToneSet | None = None,
    test_curvatures: Sequence[float] = TEST_CURVATURES,
    repetitions: int = 5,
    noise_pct: float = 0.03,
    seed: int = 2,
    duration: float = 1.0,
    sample_rate: float = 44100.0,
    solver_opts: SolverOptions | None = None,
    heights: dict[float, float] | None = None,
) -> list[tuple[float, float]]:
    """Average absolute error per injected feature-domain SNR level.

    Levels are SNRs in dB sorted from quietest noise to loudest (strictly
    descending SNR; use inf for the clean baseline).  The same unit-noise
    draws are rescaled at every level so the trend reflects noise
    amplitude, not sampling variation.
    """
    levels = [float(v) for v in snr_levels_db]
    if any(b >= a for a, b in zip(levels, levels[1:])):
        raise ValidationError(
            "snr_levels_db must be strictly descending (noise sorted ascending)"
        )
    tones = tones or default_tone_set()
    gains = _gains_by_kappa(test_curvatures, channel, atten, solver_opts, heights)
    spec = ProtocolSpec(
        training_curvatures=tuple(float(k) for k in test_curvatures),
        samples_per_curvature=1,
        noise_pct=noise_pct,
        tones=tones,
        seed=seed,
        duration=duration,
        sample_rate=sample_rate,
    )
    ref = reference_amplitudes(spec)
    rng = np.random.default_rng(seed)

    feats = []
    targets = []
    for kappa in test_curvatures:
        for _ in range(repetitions):
            sig = synth_signal(
                tones, gains[float(kappa)], duration, sample_rate, noise_pct, rng
            )
            feats.append(normalize(fft_amplitudes(sig, tones), ref))
            targets.append(float(kappa))
    feats = np.array(feats)
    targets = np.array(targets)
    unit_noise = rng.standard_normal(feats.shape)
    feat_rms = np.sqrt(np.mean(feats**2, axis=1, keepdims=True))

    out = []
    for snr in levels:
        scale = 0.0 if np.isinf(snr) else 10.0 ** (-snr / 20.0)
        noisy = feats + unit_noise * (feat_rms * scale)
        preds = model.predict(noisy)
        out.append((snr, float(np.mean(np.abs(preds - targets)))))
    return out


def format_error_table(report: ErrorReport) -> str:
    lines = [
        "curvature (1/m)   min err   avg err   max err",
        "-" * 47,
    ]
    for kappa, lo, avg, hi in report.rows:
        lines.append(f"{kappa:15.1f} {lo:9.3f} {avg:9.3f} {hi:9.3f}")
    lines.append("-" * 47)
    lines.append(f"global max error: {report.global_max:.3f} 1/m")
    return "\n".join(lines)


def write_error_report_csv(path, report: ErrorReport) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("kappa_per_m,min_abs_error,avg_abs_error,max_abs_error\n")
        for kappa, lo, avg, hi in report.rows:
            fh.write(f"{repr(kappa)},{repr(lo)},{repr(avg)},{repr(hi)}\n")


def write_scatter_csv(path, report: ErrorReport) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("actual_kappa,predicted_kappa\n")
        for actual, pred in report.pairs:
            fh.write(f"{repr(float(actual))},{repr(float(pred))}\n")
