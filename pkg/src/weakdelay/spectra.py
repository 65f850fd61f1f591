"""FFT magnitude spectra, Hann-windowed spectrograms, and peak-ratio SNR."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .model import Trace

__all__ = ["Spectrum", "Spectrogram", "fft_magnitude", "spectrogram", "snr_db"]


@dataclass(frozen=True)
class Spectrum:
    """One-sided magnitude spectrum; bin k sits at frequency k*df."""

    df: float
    magnitudes: np.ndarray

    def __post_init__(self):
        mags = np.asarray(self.magnitudes, dtype=np.float64)
        if not np.all(np.isfinite(mags)):
            raise ValueError("magnitudes must be finite")
        mags.setflags(write=False)
        object.__setattr__(self, "magnitudes", mags)

    def frequencies(self) -> np.ndarray:
        return self.df * np.arange(len(self.magnitudes))


@dataclass(frozen=True)
class Spectrogram:
    """Short-time spectra at stride hop; times holds each column's center."""

    window_len: int
    hop: int
    columns: Tuple[Spectrum, ...]
    times: np.ndarray

    def energies(self) -> np.ndarray:
        """Total energy (sum of squared magnitudes) per column."""
        return np.array([float(np.sum(col.magnitudes**2)) for col in self.columns])


def fft_magnitude(trace: Trace) -> Spectrum:
    """One-sided DFT magnitude of the raw samples; df = 1/(n*dt).

    No padding, no detrending, no window.
    """
    mags = np.abs(np.fft.rfft(trace.samples))
    return Spectrum(df=1.0 / (trace.grid.n * trace.grid.dt), magnitudes=mags)


def spectrogram(trace: Trace, window_len: int = 4096, hop: int = 2048) -> Spectrogram:
    """Hann-windowed short-time FFT magnitude columns."""
    n = trace.grid.n
    if window_len > n:
        raise ValueError(f"window_len={window_len} exceeds trace length {n}")
    if hop < 1:
        raise ValueError(f"hop must be >= 1, got {hop}")
    window = np.hanning(window_len)
    df = 1.0 / (window_len * trace.grid.dt)
    count = (n - window_len) // hop + 1
    cols = []
    centers = np.empty(count)
    for k in range(count):
        start = k * hop
        seg = trace.samples[start : start + window_len] * window
        cols.append(Spectrum(df=df, magnitudes=np.abs(np.fft.rfft(seg))))
        centers[k] = trace.grid.origin + (start + (window_len - 1) / 2.0) * trace.grid.dt
    return Spectrogram(window_len=window_len, hop=hop, columns=tuple(cols), times=centers)


def snr_db(signal: Trace, noise: Trace) -> float:
    """Peak-ratio SNR: 20*log10(max|signal| / max|noise|)."""
    if signal.grid != noise.grid:
        raise ValueError("signal and noise live on different grids")
    peak_s = float(np.max(np.abs(signal.samples)))
    peak_n = float(np.max(np.abs(noise.samples)))
    if peak_s == 0.0 or peak_n == 0.0:
        raise ValueError("snr undefined for an all-zero trace")
    return 20.0 * math.log10(peak_s / peak_n)
