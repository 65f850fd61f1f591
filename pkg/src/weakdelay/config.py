"""Flat key=value run configuration.

One key per line, '#' starts a comment, unknown keys are rejected, and
every parse error carries its line number. parse/format round-trip is
lossless so configs can be regenerated from a RunConfig verbatim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

from .correlate import CLAMP_RATIO
from .harness import GateSpec, K_REF, calibrated_config
from .model import MeasurementConfig, TimeGrid
from .noise import RECIPE_NAMES

__all__ = ["ConfigError", "RunConfig", "parse_config", "format_config"]


class ConfigError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


_OUTPUT_DEFAULTS: Dict[str, str] = {
    "trace_out": "trace.csv",
    "theta_out": "theta.csv",
    "json_out": "batch.json",
    "spectrum_signal_out": "spectrum_signal.csv",
    "spectrum_noise_out": "spectrum_noise.csv",
    "spectrogram_out": "spectrogram_noise.csv",
}


@dataclass(frozen=True)
class RunConfig:
    """Everything one run/batch/spectra invocation needs."""

    grid: TimeGrid = field(default_factory=TimeGrid)
    measurement: MeasurementConfig = field(default_factory=MeasurementConfig)
    noise: str = "none"
    snr_db: float = -5.1
    n4_snr_db: float = -23.5
    sigma: float = 1.0
    clamp_enabled: bool = False
    clamp_mode: str = "ratio"
    clamp_value: Optional[float] = None
    seeds: Tuple[Tuple[int, int], ...] = ()
    readout_time: float = 1.5e-3
    gate: Optional[GateSpec] = None
    calibrate: Optional[Tuple[float, float]] = None
    threads: Optional[int] = None
    k_ref: float = K_REF
    outputs: Tuple[Tuple[str, str], ...] = tuple(sorted(_OUTPUT_DEFAULTS.items()))

    def output(self, key: str) -> str:
        return dict(self.outputs)[key]

    def clamp_ratio_or_value(self) -> float:
        if self.clamp_value is not None:
            return self.clamp_value
        if self.clamp_mode == "ratio":
            return CLAMP_RATIO
        raise ValueError("absolute clamp mode requires clamp_value")

    def effective_measurement(self) -> MeasurementConfig:
        """The measurement config with calibration applied when requested."""
        if self.calibrate is None:
            return self.measurement
        t0_target, ttau_target = self.calibrate
        return calibrated_config(t0_target, ttau_target, self.measurement, self.readout_time)


_FLOAT_KEYS = {
    "dt",
    "origin",
    "i0",
    "zeta",
    "t0",
    "alpha",
    "tau",
    "shift_override",
    "snr_db",
    "n4_snr_db",
    "sigma",
    "clamp_value",
    "readout_time",
    "gate_min",
    "gate_max",
    "calibrate_theta0",
    "calibrate_theta_tau",
    "k_ref",
}
_INT_KEYS = {"samples", "threads"}
_BOOL_KEYS = {"clamp"}
_STR_KEYS = {"noise", "clamp_mode", "seeds"} | set(_OUTPUT_DEFAULTS)

KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS


def _parse_value(key: str, raw: str, line: int):
    if key in _FLOAT_KEYS:
        try:
            value = float(raw)
        except ValueError:
            raise ConfigError(line, f"key '{key}': not a number: {raw!r}") from None
        if not math.isfinite(value):
            raise ConfigError(line, f"key '{key}': value must be finite")
        return value
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(line, f"key '{key}': not an integer: {raw!r}") from None
    if key in _BOOL_KEYS:
        if raw not in ("true", "false"):
            raise ConfigError(line, f"key '{key}': expected true or false, got {raw!r}")
        return raw == "true"
    return raw


def _parse_seeds(raw: str, line: int) -> Tuple[Tuple[int, int], ...]:
    pairs = []
    for token in raw.replace(",", " ").split():
        parts = token.split(":")
        if len(parts) != 2:
            raise ConfigError(line, f"seed token {token!r} is not of the form xi1:xi2")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ConfigError(line, f"seed token {token!r} has non-integer parts") from None
    if not pairs:
        raise ConfigError(line, "seeds key present but empty")
    return tuple(pairs)


def parse_config(text: str) -> RunConfig:
    values: Dict[str, object] = {}
    lines: Dict[str, int] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        stripped = raw_line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(lineno, f"expected 'key = value', got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(lineno, f"unknown key {key!r}")
        if key in values:
            raise ConfigError(lineno, f"duplicate key {key!r}")
        if not raw:
            raise ConfigError(lineno, f"key '{key}' has an empty value")
        if key == "seeds":
            values[key] = _parse_seeds(raw, lineno)
        else:
            values[key] = _parse_value(key, raw, lineno)
        lines[key] = lineno

    def where(*keys: str) -> int:
        for key in keys:
            if key in lines:
                return lines[key]
        return 0

    def fail(message: str, *keys: str):
        # point at the offending key's line when the message names one
        first = message.split("=")[0].split()[0] if message else ""
        if first in lines:
            raise ConfigError(lines[first], message)
        raise ConfigError(where(*keys), message)

    grid_kwargs = {}
    if "dt" in values:
        grid_kwargs["dt"] = values["dt"]
    if "samples" in values:
        grid_kwargs["n"] = values["samples"]
    if "origin" in values:
        grid_kwargs["origin"] = values["origin"]
    try:
        grid = TimeGrid(**grid_kwargs)
    except ValueError as exc:
        fail(str(exc), "dt", "samples", "origin")

    meas_kwargs = {
        name: values[name] for name in ("i0", "zeta", "t0", "alpha", "tau", "shift_override") if name in values
    }
    try:
        measurement = MeasurementConfig(**meas_kwargs)
    except ValueError as exc:
        fail(str(exc), "tau", "zeta", "alpha", "i0", "t0", "shift_override")

    noise = values.get("noise", "none")
    if noise not in RECIPE_NAMES:
        fail(f"unknown noise recipe {noise!r}; expected one of {RECIPE_NAMES}", "noise")

    clamp_mode = values.get("clamp_mode", "ratio")
    if clamp_mode not in ("ratio", "absolute"):
        fail(f"clamp_mode must be 'ratio' or 'absolute', got {clamp_mode!r}", "clamp_mode")
    clamp_value = values.get("clamp_value")
    if clamp_value is not None and not clamp_value > 0.0:
        fail("clamp_value must be positive", "clamp_value")
    clamp_enabled = values.get("clamp", False)
    if clamp_enabled and clamp_mode == "absolute" and clamp_value is None:
        fail("absolute clamp mode requires clamp_value", "clamp_mode", "clamp")

    if ("gate_min" in values) != ("gate_max" in values):
        fail("gate_min and gate_max must be given together", "gate_min", "gate_max")
    gate = None
    if "gate_min" in values:
        try:
            gate = GateSpec(values["gate_min"], values["gate_max"])
        except ValueError as exc:
            fail(str(exc), "gate_min", "gate_max")

    if ("calibrate_theta0" in values) != ("calibrate_theta_tau" in values):
        fail(
            "calibrate_theta0 and calibrate_theta_tau must be given together",
            "calibrate_theta0",
            "calibrate_theta_tau",
        )
    calibrate = None
    if "calibrate_theta0" in values:
        calibrate = (values["calibrate_theta0"], values["calibrate_theta_tau"])
        if not (calibrate[0] > 0.0 and calibrate[1] > 0.0):
            fail("calibration targets must be positive", "calibrate_theta0", "calibrate_theta_tau")
        if calibrate[1] > calibrate[0]:
            fail("calibrate_theta_tau must not exceed calibrate_theta0", "calibrate_theta_tau")

    threads = values.get("threads")
    if threads is not None and threads < 1:
        fail("threads must be >= 1", "threads")

    sigma = values.get("sigma", 1.0)
    if sigma < 0.0:
        fail("sigma must be non-negative", "sigma")

    readout_time = values.get("readout_time", 1.5e-3)
    try:
        grid.index_of(readout_time)
    except ValueError as exc:
        fail(str(exc), "readout_time")

    outputs = dict(_OUTPUT_DEFAULTS)
    for key in _OUTPUT_DEFAULTS:
        if key in values:
            outputs[key] = values[key]

    return RunConfig(
        grid=grid,
        measurement=measurement,
        noise=noise,
        snr_db=values.get("snr_db", -5.1),
        n4_snr_db=values.get("n4_snr_db", -23.5),
        sigma=sigma,
        clamp_enabled=clamp_enabled,
        clamp_mode=clamp_mode,
        clamp_value=clamp_value,
        seeds=values.get("seeds", ()),
        readout_time=readout_time,
        gate=gate,
        calibrate=calibrate,
        threads=threads,
        k_ref=values.get("k_ref", K_REF),
        outputs=tuple(sorted(outputs.items())),
    )


def _fmt(value: float) -> str:
    return format(value, ".17g")


def format_config(cfg: RunConfig) -> str:
    """Canonical text form; parse_config(format_config(c)) == c."""
    out = [
        f"dt = {_fmt(cfg.grid.dt)}",
        f"samples = {cfg.grid.n}",
        f"origin = {_fmt(cfg.grid.origin)}",
        f"i0 = {_fmt(cfg.measurement.i0)}",
        f"zeta = {_fmt(cfg.measurement.zeta)}",
        f"t0 = {_fmt(cfg.measurement.t0)}",
        f"alpha = {_fmt(cfg.measurement.alpha)}",
        f"tau = {_fmt(cfg.measurement.tau)}",
    ]
    if cfg.measurement.shift_override is not None:
        out.append(f"shift_override = {_fmt(cfg.measurement.shift_override)}")
    out += [
        f"noise = {cfg.noise}",
        f"snr_db = {_fmt(cfg.snr_db)}",
        f"n4_snr_db = {_fmt(cfg.n4_snr_db)}",
        f"sigma = {_fmt(cfg.sigma)}",
        f"clamp = {'true' if cfg.clamp_enabled else 'false'}",
        f"clamp_mode = {cfg.clamp_mode}",
    ]
    if cfg.clamp_value is not None:
        out.append(f"clamp_value = {_fmt(cfg.clamp_value)}")
    if cfg.seeds:
        out.append("seeds = " + " ".join(f"{a}:{b}" for a, b in cfg.seeds))
    out.append(f"readout_time = {_fmt(cfg.readout_time)}")
    if cfg.gate is not None:
        out.append(f"gate_min = {_fmt(cfg.gate.theta_min)}")
        out.append(f"gate_max = {_fmt(cfg.gate.theta_max)}")
    if cfg.calibrate is not None:
        out.append(f"calibrate_theta0 = {_fmt(cfg.calibrate[0])}")
        out.append(f"calibrate_theta_tau = {_fmt(cfg.calibrate[1])}")
    if cfg.threads is not None:
        out.append(f"threads = {cfg.threads}")
    out.append(f"k_ref = {_fmt(cfg.k_ref)}")
    for key, path in cfg.outputs:
        out.append(f"{key} = {path}")
    return "\n".join(out) + "\n"
