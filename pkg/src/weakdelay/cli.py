"""Command-line surface: run, batch, spectra, table, calibrate."""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import List, Optional

from .config import RunConfig, parse_config
from .correlate import ClampSpec, clamp_for_signal, theta
from .emitters import (
    emit_batch_json,
    emit_spectrum_csv,
    emit_spectrogram_csv,
    emit_theta_csv,
    emit_trace_csv,
)
from .fixtures import TABLE_IDS, recompute_table1, verify_summaries
from .harness import (
    calibrate_shift,
    gate_range,
    measure_traces,
    run_batch,
    run_single,
    sensitivity,
    stats,
)
from .model import MeasurementConfig, reference_signal
from .noise import recipe_specs, synthesize
from .spectra import fft_magnitude, spectrogram

__all__ = ["main"]

def _needs_seeds(recipe: str) -> bool:
    return recipe not in ("none", "N4")


def _load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise RuntimeError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        return parse_config(text)
    except ValueError as exc:
        raise RuntimeError(f"{path}: {exc}") from exc


def _clamp_spec(cfg: RunConfig, measurement: MeasurementConfig) -> ClampSpec:
    if not cfg.clamp_enabled:
        return ClampSpec()
    if cfg.clamp_mode == "absolute":
        return ClampSpec(threshold=cfg.clamp_ratio_or_value(), enabled=True)
    signal = reference_signal(cfg.grid, measurement)
    return clamp_for_signal(signal, ratio=cfg.clamp_ratio_or_value())


def _first_pair(cfg: RunConfig):
    if _needs_seeds(cfg.noise):
        if not cfg.seeds:
            raise RuntimeError(f"noise recipe {cfg.noise!r} requires seeds")
        return cfg.seeds[0]
    return None


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    measurement = cfg.effective_measurement()
    clamp_spec = _clamp_spec(cfg, measurement)
    pair = _first_pair(cfg)
    noise_pair = recipe_specs(cfg.noise, pair or (0, 0), snr_db=cfg.snr_db, n4_snr_db=cfg.n4_snr_db, sigma=cfg.sigma)

    record = run_single(measurement, noise_pair, clamp_spec, cfg.readout_time, cfg.grid, seed_pair=pair)
    traces = measure_traces(measurement, noise_pair, clamp_spec, cfg.grid)
    trace_path = emit_trace_csv(traces.ch1_tau, cfg.output("trace_out"))
    theta_path = emit_theta_csv(theta(traces.ch1_tau, traces.ch2), cfg.output("theta_out"))

    snr = "n/a" if record.snr_db_actual is None else f"{record.snr_db_actual:.2f} dB"
    print(f"theta0    = {record.theta0:.9e}")
    print(f"theta_tau = {record.theta_tau:.9e}")
    print(f"snr       = {snr}")
    print(f"wrote {trace_path} and {theta_path}")
    return 0


def _cmd_batch(args) -> int:
    cfg = _load_config(args.config)
    if not cfg.seeds:
        raise RuntimeError("batch requires a seeds list in the config")
    measurement = cfg.effective_measurement()
    clamp_spec = _clamp_spec(cfg, measurement)
    result = run_batch(
        measurement,
        cfg.noise,
        cfg.seeds,
        clamp_spec,
        cfg.readout_time,
        cfg.grid,
        snr_db_target=cfg.snr_db,
        n4_snr_db=cfg.n4_snr_db,
        k_ref=cfg.k_ref,
        threads=cfg.threads,
    )
    json_path = emit_batch_json(result, cfg.output("json_out"))

    def line(tag, s0, st, sens):
        print(
            f"{tag:8s} mean0={s0.mean:.6e} dev0={s0.sample_dev:.6e} "
            f"mean_tau={st.mean:.6e} dev_tau={st.sample_dev:.6e} "
            f"K={sens.k:.6f} E={sens.e:.6f} K/Kref={sens.k_normalized:.4f} (n={s0.count})"
        )

    line("all", result.stats0, result.stats_tau, result.sensitivity)
    if cfg.gate is not None:
        gated = gate_range(result.records, cfg.gate)
        if not gated:
            raise RuntimeError("gate excluded every record; no gated statistics")
        g0 = stats([r.theta0 for r in gated])
        gt = stats([r.theta_tau for r in gated])
        gs = sensitivity(g0, gt, measurement.tau, k_ref=cfg.k_ref, readout_time=cfg.readout_time)
        line("gated", g0, gt, gs)
    print(f"wrote {json_path}")
    return 0


def _cmd_spectra(args) -> int:
    cfg = _load_config(args.config)
    measurement = cfg.effective_measurement()
    signal = reference_signal(cfg.grid, measurement)
    paths = [emit_spectrum_csv(fft_magnitude(signal), cfg.output("spectrum_signal_out"))]
    if cfg.noise != "none":
        pair = _first_pair(cfg)
        spec1, _ = recipe_specs(cfg.noise, pair or (0, 0), snr_db=cfg.snr_db, n4_snr_db=cfg.n4_snr_db, sigma=cfg.sigma)
        noise_trace = synthesize(cfg.grid, spec1, reference=signal)
        paths.append(emit_spectrum_csv(fft_magnitude(noise_trace), cfg.output("spectrum_noise_out")))
        paths.append(emit_spectrogram_csv(spectrogram(noise_trace), cfg.output("spectrogram_out")))
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_table(args) -> int:
    diffs = recompute_table1() if args.id == "I" else verify_summaries(args.id)
    bad = 0
    for d in diffs:
        if d.known_divergent:
            status = "known-divergent" if d.ok else "MISMATCH (drifted from frozen value)"
        else:
            status = "ok" if d.ok else "MISMATCH"
        if not d.ok:
            bad += 1
        print(f"{d.row:16s} {d.column:9s} printed={d.printed:>8s} computed={d.computed:9.6f} {status}")
    if bad:
        print(f"error: {bad} cell(s) diverge beyond the registered set", file=sys.stderr)
        return 1
    return 0


def _cmd_calibrate(args) -> int:
    base = MeasurementConfig()
    if args.config:
        base = _load_config(args.config).measurement
    shift = calibrate_shift(args.theta0, args.theta_tau, base, args.readout)
    print(f"delta_t = {shift:.9e} s")
    print(f"effective cot(alpha) = delta_t/tau = {shift / base.tau:.6e}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakdelay",
        description="Auto-correlative weak-value time-delay simulator and analysis toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="one measurement; emits trace and theta CSVs")
    p_run.add_argument("--config", required=True)
    p_run.set_defaults(func=_cmd_run)

    p_batch = sub.add_parser("batch", help="multi-seed campaign; emits JSON and a summary")
    p_batch.add_argument("--config", required=True)
    p_batch.set_defaults(func=_cmd_batch)

    p_spec = sub.add_parser("spectra", help="FFT and spectrogram CSVs for signal and noise")
    p_spec.add_argument("--config", required=True)
    p_spec.set_defaults(func=_cmd_spectra)

    p_table = sub.add_parser("table", help="diff recomputed statistics against printed cells")
    p_table.add_argument("--id", required=True, choices=list(TABLE_IDS))
    p_table.set_defaults(func=_cmd_table)

    p_cal = sub.add_parser("calibrate", help="fit the pointer shift to a Theta target pair")
    p_cal.add_argument("--theta0", type=float, required=True)
    p_cal.add_argument("--theta-tau", dest="theta_tau", type=float, required=True)
    p_cal.add_argument("--readout", type=float, default=1.5e-3)
    p_cal.add_argument("--config")
    p_cal.set_defaults(func=_cmd_calibrate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
