"""Closed-form AWVA signal model.

Gaussian pointer pulses, the weak value -cot(alpha), the amplified delay
delta_t, and the two detector intensities. Everything here is a pure
function of the configuration; traces are immutable once built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "TimeGrid",
    "MeasurementConfig",
    "Trace",
    "default_grid",
    "weak_value",
    "pointer_shift",
    "initial_pointer",
    "measurement_signal",
    "reference_signal",
]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling lattice: sample k lives at origin + k*dt."""

    dt: float = 1.0e-8
    n: int = 300001
    origin: float = 0.0

    def __post_init__(self):
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n < 2:
            raise ValueError(f"need at least 2 samples, got n={self.n}")

    @property
    def duration(self) -> float:
        return self.dt * (self.n - 1)

    def times(self) -> np.ndarray:
        return self.origin + self.dt * np.arange(self.n)

    def index_of(self, t: float) -> int:
        """Nearest sample index for time t; t must fall inside the grid."""
        k = int(round((t - self.origin) / self.dt))
        if k < 0 or k >= self.n:
            raise ValueError(f"time {t} outside grid [{self.origin}, {self.origin + self.duration}]")
        return k


def default_grid() -> TimeGrid:
    """100 MHz sampling over 3 ms."""
    return TimeGrid()


@dataclass(frozen=True)
class MeasurementConfig:
    """Physical parameters of one delay measurement.

    i0 is the dimensionless intensity scale, zeta the pointer spread in
    seconds, t0 the pulse center, alpha the post-selection angle and tau
    the delay under estimation. shift_override, when set, fixes the
    effective pointer shift directly instead of tau*cot(alpha); it is the
    hook used by calibration and is deliberately exempt from the weak
    -regime guard (the guard constrains the coupling approximation, not
    the effective shift).
    """

    i0: float = 1.0
    zeta: float = 2.0e-4
    t0: float = 1.5e-3
    alpha: float = 0.01
    tau: float = 3.0e-9
    shift_override: Optional[float] = None

    def __post_init__(self):
        if not (self.zeta > 0.0):
            raise ValueError(f"zeta must be positive, got {self.zeta}")
        if not (0.0 < self.alpha < math.pi / 2):
            raise ValueError(f"alpha must lie in (0, pi/2), got {self.alpha}")
        # weak-measurement regime: the linear-response shift formula breaks down otherwise
        if not (abs(self.tau) < self.zeta / 10.0):
            raise ValueError(
                f"tau={self.tau} violates the weak regime |tau| < zeta/10 = {self.zeta / 10.0}"
            )


@dataclass(frozen=True)
class Trace:
    """A real sampled waveform on a TimeGrid. Samples are read-only."""

    grid: TimeGrid
    samples: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=np.float64)
        if arr.shape != (self.grid.n,):
            raise ValueError(f"samples shape {arr.shape} does not match grid n={self.grid.n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        arr = arr.copy() if arr is self.samples else arr
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)


def weak_value(alpha: float) -> float:
    """Real part of the weak value for post-selection angle alpha: -cot(alpha)."""
    if not (0.0 < alpha < math.pi / 2):
        raise ValueError(f"alpha must lie in (0, pi/2), got {alpha}")
    return -1.0 / math.tan(alpha)


def pointer_shift(cfg: MeasurementConfig) -> float:
    """Effective pointer shift delta_t: the override if set, else tau*cot(alpha)."""
    if cfg.shift_override is not None:
        return cfg.shift_override
    return cfg.tau / math.tan(cfg.alpha)


def _gaussian_amplitude(i0: float, zeta: float) -> float:
    return i0 * (2.0 * math.pi * zeta**2) ** -0.25


def _pulse(grid: TimeGrid, center: float, amplitude: float, zeta: float) -> np.ndarray:
    t = grid.times()
    return amplitude * np.exp(-((t - center) ** 2) / (4.0 * zeta**2))


def initial_pointer(grid: TimeGrid, cfg: MeasurementConfig) -> Trace:
    """Input pulse i0*(2*pi*zeta^2)^(-1/4)*exp(-(t-t0)^2/(4 zeta^2))."""
    amp = _gaussian_amplitude(cfg.i0, cfg.zeta)
    return Trace(grid, _pulse(grid, cfg.t0, amp, cfg.zeta))


def measurement_signal(grid: TimeGrid, cfg: MeasurementConfig) -> Trace:
    """Post-selected channel-1 intensity: the pointer scaled by sin^2(alpha)/2
    and delayed by the amplified shift."""
    amp = 0.5 * math.sin(cfg.alpha) ** 2 * _gaussian_amplitude(cfg.i0, cfg.zeta)
    return Trace(grid, _pulse(grid, cfg.t0 + pointer_shift(cfg), amp, cfg.zeta))


def reference_signal(grid: TimeGrid, cfg: MeasurementConfig) -> Trace:
    """Channel-2 intensity: same as the measurement channel with zero shift;
    independent of cfg.tau."""
    amp = 0.5 * math.sin(cfg.alpha) ** 2 * _gaussian_amplitude(cfg.i0, cfg.zeta)
    return Trace(grid, _pulse(grid, cfg.t0, amp, cfg.zeta))
