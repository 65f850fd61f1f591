"""CSV and JSON emitters.

All numeric output is written with 17 significant digits so values
round-trip exactly. Relative output paths are redirected into
$WEAKDELAY_OUTDIR when that variable is set.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Union

from .correlate import ThetaCurve
from .harness import BatchResult
from .model import Trace
from .spectra import Spectrogram, Spectrum

__all__ = [
    "OUTDIR_ENV",
    "resolve_output_path",
    "emit_trace_csv",
    "emit_theta_csv",
    "emit_spectrum_csv",
    "emit_spectrogram_csv",
    "emit_batch_json",
]

OUTDIR_ENV = "WEAKDELAY_OUTDIR"


def resolve_output_path(path: Union[str, Path]) -> Path:
    """Relative paths land in $WEAKDELAY_OUTDIR when set; absolute paths win."""
    path = Path(path)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not path.is_absolute():
        path = Path(outdir) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write(path: Union[str, Path], text: str) -> Path:
    target = resolve_output_path(path)
    try:
        target.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {target}: {exc}") from exc
    return target


def emit_trace_csv(trace: Trace, path: Union[str, Path]) -> Path:
    t = trace.grid.times()
    lines = ["t_seconds,amplitude"]
    lines += [f"{_fmt(ti)},{_fmt(xi)}" for ti, xi in zip(t, trace.samples)]
    return _write(path, "\n".join(lines) + "\n")


def emit_theta_csv(curve: ThetaCurve, path: Union[str, Path]) -> Path:
    t = curve.grid.times()
    lines = ["t_seconds,theta"]
    lines += [f"{_fmt(ti)},{_fmt(vi)}" for ti, vi in zip(t, curve.values)]
    return _write(path, "\n".join(lines) + "\n")


def emit_spectrum_csv(spectrum: Spectrum, path: Union[str, Path]) -> Path:
    lines = ["f_hz,magnitude"]
    lines += [
        f"{_fmt(k * spectrum.df)},{_fmt(m)}" for k, m in enumerate(spectrum.magnitudes)
    ]
    return _write(path, "\n".join(lines) + "\n")


def emit_spectrogram_csv(spg: Spectrogram, path: Union[str, Path]) -> Path:
    """Long format: one row per (column time, frequency bin)."""
    lines = ["t_seconds,f_hz,magnitude"]
    for t, col in zip(spg.times, spg.columns):
        ts = _fmt(t)
        lines += [f"{ts},{_fmt(k * col.df)},{_fmt(m)}" for k, m in enumerate(col.magnitudes)]
    return _write(path, "\n".join(lines) + "\n")


def emit_batch_json(result: BatchResult, path: Union[str, Path]) -> Path:
    payload = {
        "records": [
            {
                "seed_pair": list(r.seed_pair) if r.seed_pair is not None else None,
                "theta0": r.theta0,
                "theta_tau": r.theta_tau,
                "snr_db_actual": r.snr_db_actual,
            }
            for r in result.records
        ],
        "stats0": _stats_dict(result.stats0),
        "stats_tau": _stats_dict(result.stats_tau),
        "sensitivity": {
            "k": result.sensitivity.k,
            "e": result.sensitivity.e,
            "k_normalized": result.sensitivity.k_normalized,
            "readout_time": result.sensitivity.readout_time,
            "k_ref": result.sensitivity.k_ref,
        },
    }
    return _write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _stats_dict(s) -> dict:
    return {"mean": s.mean, "sample_dev": s.sample_dev, "count": s.count}
