"""Multi-seed measurement campaigns and their statistics.

run_single performs one AWVA measurement: both channels get their own
noise realization, the same realizations serve the tau=0 and tau=tau*
readouts, and Theta is read off the running integral at the readout time.
run_batch maps that over seed pairs and reduces to mean, sample deviation
and the sensitivity figure K with its error E.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from .correlate import ClampSpec, clamp, theta, theta_closed_form
from .model import MeasurementConfig, TimeGrid, Trace, default_grid, measurement_signal, reference_signal
from .noise import NoiseSpec, Seed, recipe_specs, synthesize
from .spectra import snr_db

__all__ = [
    "MeasurementRecord",
    "MeasurementTraces",
    "Stats",
    "SensitivityResult",
    "GateSpec",
    "BatchResult",
    "K_REF",
    "measure_traces",
    "run_single",
    "run_batch",
    "stats",
    "sensitivity",
    "gate_range",
    "calibrate_shift",
    "calibrated_config",
]

K_REF = 0.0258  # noise-free sensitivity used to normalize K


@dataclass(frozen=True)
class MeasurementRecord:
    """One seed pair's readouts; snr_db_actual is None for noise-free runs."""

    seed_pair: Optional[Tuple[Seed, Seed]]
    theta0: float
    theta_tau: float
    snr_db_actual: Optional[float]

    def __post_init__(self):
        if not (math.isfinite(self.theta0) and math.isfinite(self.theta_tau)):
            raise ValueError("theta readouts must be finite")
        if self.snr_db_actual is not None and not math.isfinite(self.snr_db_actual):
            raise ValueError("snr_db_actual must be finite when present")


@dataclass(frozen=True)
class Stats:
    mean: float
    sample_dev: float
    count: int


@dataclass(frozen=True)
class SensitivityResult:
    k: float
    e: float
    k_normalized: float
    readout_time: float
    k_ref: float


@dataclass(frozen=True)
class GateSpec:
    theta_min: float
    theta_max: float

    def __post_init__(self):
        if not (self.theta_min < self.theta_max):
            raise ValueError(f"gate requires theta_min < theta_max, got ({self.theta_min}, {self.theta_max})")


@dataclass(frozen=True)
class BatchResult:
    records: Tuple[MeasurementRecord, ...]
    stats0: Stats
    stats_tau: Stats
    sensitivity: SensitivityResult


@dataclass(frozen=True)
class MeasurementTraces:
    """Assembled channel traces of one measurement (post-clamp)."""

    ch1_0: Trace
    ch1_tau: Trace
    ch2: Trace
    noise1: Optional[Trace]
    noise2: Optional[Trace]


def measure_traces(
    cfg: MeasurementConfig,
    noise_pair: Tuple[Optional[NoiseSpec], Optional[NoiseSpec]],
    clamp_spec: ClampSpec = ClampSpec(),
    grid: Optional[TimeGrid] = None,
) -> MeasurementTraces:
    """Build both channels for the tau=0 and tau=cfg.tau readouts, one
    noise realization per channel shared between the two."""
    grid = grid or default_grid()
    sig_ref = reference_signal(grid, cfg)  # both channels' tau=0 shape
    sig_tau = measurement_signal(grid, cfg)
    spec1, spec2 = noise_pair
    n1 = synthesize(grid, spec1, reference=sig_ref) if spec1 is not None else None
    n2 = synthesize(grid, spec2, reference=sig_ref) if spec2 is not None else None

    def channel(sig: Trace, noise: Optional[Trace]) -> Trace:
        raw = sig if noise is None else Trace(grid, sig.samples + noise.samples)
        return clamp(raw, clamp_spec)

    return MeasurementTraces(
        ch1_0=channel(sig_ref, n1),
        ch1_tau=channel(sig_tau, n1),
        ch2=channel(sig_ref, n2),
        noise1=n1,
        noise2=n2,
    )


def run_single(
    cfg: MeasurementConfig,
    noise_pair: Tuple[Optional[NoiseSpec], Optional[NoiseSpec]],
    clamp_spec: ClampSpec = ClampSpec(),
    readout_time: float = 1.5e-3,
    grid: Optional[TimeGrid] = None,
    seed_pair: Optional[Tuple[Seed, Seed]] = None,
) -> MeasurementRecord:
    """One measurement: Theta at the readout for tau=0 and for tau=cfg.tau,
    sharing the same noise realizations between the two readouts."""
    grid = grid or default_grid()
    grid.index_of(readout_time)  # fail early if the readout is off-grid
    traces = measure_traces(cfg, noise_pair, clamp_spec, grid)
    theta0 = theta(traces.ch1_0, traces.ch2).at(readout_time)
    theta_tau = theta(traces.ch1_tau, traces.ch2).at(readout_time)
    actual = (
        snr_db(reference_signal(grid, cfg), traces.noise1) if traces.noise1 is not None else None
    )
    return MeasurementRecord(seed_pair=seed_pair, theta0=theta0, theta_tau=theta_tau, snr_db_actual=actual)


def stats(values: Sequence[float]) -> Stats:
    """Mean and Bessel-corrected sample standard deviation; dev is 0 for a
    single value."""
    if len(values) == 0:
        raise ValueError("stats of an empty sequence")
    arr = np.asarray(values, dtype=np.float64)
    mean = float(np.mean(arr))
    dev = 0.0 if len(arr) == 1 else float(np.std(arr, ddof=1))
    return Stats(mean=mean, sample_dev=dev, count=len(arr))


def sensitivity(
    stats0: Stats,
    stats_tau: Stats,
    tau: float,
    k_ref: float = K_REF,
    readout_time: float = 1.5e-3,
) -> SensitivityResult:
    """K = (mean0 - mean_tau)/tau with error E = (dev0 + dev_tau)/tau."""
    if tau == 0.0:
        raise ValueError("sensitivity undefined for tau = 0")
    k = (stats0.mean - stats_tau.mean) / tau
    e = (stats0.sample_dev + stats_tau.sample_dev) / tau
    return SensitivityResult(k=k, e=e, k_normalized=k / k_ref, readout_time=readout_time, k_ref=k_ref)


def gate_range(
    records: Sequence[MeasurementRecord], gate: GateSpec
) -> Tuple[MeasurementRecord, ...]:
    """Keep records whose theta0 AND theta_tau both lie strictly inside the gate."""
    return tuple(
        r
        for r in records
        if gate.theta_min < r.theta0 < gate.theta_max
        and gate.theta_min < r.theta_tau < gate.theta_max
    )


def run_batch(
    cfg: MeasurementConfig,
    recipe: str,
    seeds: Sequence[Tuple[Seed, Seed]],
    clamp_spec: ClampSpec = ClampSpec(),
    readout_time: float = 1.5e-3,
    grid: Optional[TimeGrid] = None,
    snr_db_target: float = -5.1,
    n4_snr_db: float = -23.5,
    k_ref: float = K_REF,
    threads: Optional[int] = None,
) -> BatchResult:
    """One MeasurementRecord per seed pair, in input order, plus statistics.

    Evaluations are independent pure functions, so the optional thread pool
    changes wall time only; records and statistics are identical for any
    thread count.
    """
    if len(seeds) == 0:
        raise ValueError("run_batch needs at least one seed pair")
    grid = grid or default_grid()

    def one(pair: Tuple[Seed, Seed]) -> MeasurementRecord:
        noise_pair = recipe_specs(recipe, pair, snr_db=snr_db_target, n4_snr_db=n4_snr_db)
        return run_single(cfg, noise_pair, clamp_spec, readout_time, grid, seed_pair=pair)

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = tuple(pool.map(one, seeds))
    else:
        records = tuple(one(p) for p in seeds)

    stats0 = stats([r.theta0 for r in records])
    stats_tau = stats([r.theta_tau for r in records])
    sens = sensitivity(stats0, stats_tau, cfg.tau, k_ref=k_ref, readout_time=readout_time)
    return BatchResult(records=records, stats0=stats0, stats_tau=stats_tau, sensitivity=sens)


def calibrate_shift(
    target_theta0: float,
    target_theta_tau: float,
    cfg: Optional[MeasurementConfig] = None,
    readout_time: float = 1.5e-3,
) -> float:
    """Pointer shift delta_t reproducing the target Theta pair analytically.

    The amplitude scale is first fixed so the zero-shift closed form hits
    target_theta0 at the readout, then delta_t is bisected on (0, 10*zeta)
    until the closed form hits target_theta_tau, to 1e-12 s.
    """
    cfg = cfg or MeasurementConfig()
    if not (target_theta0 > 0.0 and target_theta_tau > 0.0):
        raise ValueError("calibration targets must be positive")
    if target_theta_tau > target_theta0:
        raise ValueError("target_theta_tau must not exceed target_theta0")
    if target_theta_tau == target_theta0:
        return 0.0
    scaled = _scale_i0(cfg, target_theta0, readout_time)

    def f(shift: float) -> float:
        return theta_closed_form(replace(scaled, shift_override=shift), readout_time) - target_theta_tau

    lo, hi = 0.0, 10.0 * cfg.zeta
    if f(hi) > 0.0:
        raise ValueError("no root in (0, 10*zeta): target_theta_tau too small to reach")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scale_i0(cfg: MeasurementConfig, target_theta0: float, readout_time: float) -> MeasurementConfig:
    base = theta_closed_form(replace(cfg, shift_override=0.0), readout_time)
    # Theta scales as i0^2
    return replace(cfg, i0=cfg.i0 * math.sqrt(target_theta0 / base))


def calibrated_config(
    target_theta0: float,
    target_theta_tau: float,
    cfg: Optional[MeasurementConfig] = None,
    readout_time: float = 1.5e-3,
) -> MeasurementConfig:
    """Config with i0 rescaled and shift_override set from calibrate_shift."""
    cfg = cfg or MeasurementConfig()
    shift = calibrate_shift(target_theta0, target_theta_tau, cfg, readout_time)
    return replace(_scale_i0(cfg, target_theta0, readout_time), shift_override=shift)
