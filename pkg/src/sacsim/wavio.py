"""Mono WAV read/write for recorded or synthesized reference signals.

Supports 16-bit PCM and 32-bit IEEE float, the two formats produced by
common recording chains.  Written files default to float32 so synthesized
amplitudes survive a round trip to well below feature tolerance.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.io import wavfile

from .acoustics import Signal
from .errors import DataFormatError

__all__ = ["read_wav", "write_wav"]


def write_wav(path, sig: Signal, fmt: str = "float32") -> None:
    """Write a mono WAV file; fmt is 'float32' or 'int16'."""
    if fmt == "float32":
        data = sig.samples.astype(np.float32)
    elif fmt == "int16":
        peak = float(np.max(np.abs(sig.samples))) if sig.samples.size else 0.0
        if peak > 1.0:
            raise DataFormatError(
                f"samples exceed [-1, 1] (peak {peak:g}); rescale before int16 export"
            )
        data = np.round(sig.samples * 32767.0).astype(np.int16)
    else:
        raise DataFormatError(f"unsupported WAV format {fmt!r}")
    wavfile.write(path, int(round(sig.sample_rate)), data)


def read_wav(path) -> Signal:
    """Read a mono 16-bit PCM or 32-bit float WAV file into a Signal."""
    if not os.path.exists(path):
        raise DataFormatError(f"WAV file not found: {path}")
    try:
        rate, data = wavfile.read(path)
    except Exception as exc:
        raise DataFormatError(f"cannot parse WAV file {path}: {exc}") from exc
    if data.ndim != 1:
        raise DataFormatError(f"expected mono WAV, got {data.ndim} channels: {path}")
    if data.dtype == np.int16:
        samples = data.astype(float) / 32767.0
    elif data.dtype == np.float32:
        samples = data.astype(float)
    else:
        raise DataFormatError(
            f"unsupported WAV sample format {data.dtype} in {path}; "
            "use 16-bit PCM or 32-bit float"
        )
    return Signal(samples=samples, sample_rate=float(rate))
