"""Deterministic simulator for auto-correlative weak-value time-delay readout.

The package models a weakly coupled polarization interferometer whose pointer
is a Gaussian pulse in time.  A small group delay between the two output
ports is read out through the cross-correlation integral Theta rather than
through the pulse shapes themselves, which keeps the estimate usable at
noise levels where direct peak tracking fails.

Layout:

- ``model``      time grid, measurement configuration, analytic signals
- ``filters``    first-order continuous sections and bilinear discretization
- ``noise``      seeded noise synthesis (white, filtered, impulsive, mixes)
- ``spectra``    FFT magnitudes and Hann spectrograms
- ``correlate``  clamping, Theta integration, closed form, decomposition
- ``harness``    single runs, multi-seed campaigns, statistics, calibration
- ``fixtures``   bundled reference campaigns and reconciliation checks
- ``config``     flat key=value run configuration
- ``emitters``   CSV/JSON writers
- ``cli``        command-line entry point
"""

from .config import ConfigError, RunConfig, format_config, parse_config
from .correlate import (
    CLAMP_RATIO,
    ClampSpec,
    ThetaCurve,
    ThetaDecomposition,
    clamp,
    clamp_for_signal,
    theta,
    theta_at,
    theta_closed_form,
    theta_decomposition,
)
from .filters import (
    CHAIN_G1,
    CHAIN_G2,
    CHAIN_G3,
    G11,
    G21,
    G22,
    G23,
    G31,
    DiscreteSection,
    FilterSection,
    discretize_section,
)
from .harness import (
    K_REF,
    BatchResult,
    GateSpec,
    MeasurementRecord,
    MeasurementTraces,
    SensitivityResult,
    Stats,
    calibrate_shift,
    calibrated_config,
    gate_range,
    measure_traces,
    run_batch,
    run_single,
    sensitivity,
    stats,
)
from .model import (
    MeasurementConfig,
    TimeGrid,
    Trace,
    default_grid,
    initial_pointer,
    measurement_signal,
    pointer_shift,
    reference_signal,
    weak_value,
)
from .noise import (
    MIX_SEED_CH1,
    MIX_SEED_CH2,
    NOISE_KINDS,
    RECIPE_NAMES,
    ImpulsiveParams,
    NoiseSpec,
    colored_noise,
    impulsive_noise,
    recipe_specs,
    synthesize,
    white_noise,
)
from .spectra import Spectrogram, Spectrum, fft_magnitude, snr_db, spectrogram

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "CLAMP_RATIO",
    "CHAIN_G1",
    "CHAIN_G2",
    "CHAIN_G3",
    "ConfigError",
    "BatchResult",
    "ClampSpec",
    "DiscreteSection",
    "FilterSection",
    "G11",
    "G21",
    "G22",
    "G23",
    "G31",
    "GateSpec",
    "ImpulsiveParams",
    "K_REF",
    "MIX_SEED_CH1",
    "MIX_SEED_CH2",
    "MeasurementConfig",
    "MeasurementRecord",
    "MeasurementTraces",
    "NOISE_KINDS",
    "NoiseSpec",
    "RECIPE_NAMES",
    "RunConfig",
    "SensitivityResult",
    "Spectrogram",
    "Spectrum",
    "Stats",
    "ThetaCurve",
    "ThetaDecomposition",
    "TimeGrid",
    "Trace",
    "calibrate_shift",
    "calibrated_config",
    "clamp",
    "clamp_for_signal",
    "colored_noise",
    "default_grid",
    "discretize_section",
    "fft_magnitude",
    "format_config",
    "gate_range",
    "impulsive_noise",
    "initial_pointer",
    "measure_traces",
    "measurement_signal",
    "parse_config",
    "pointer_shift",
    "recipe_specs",
    "reference_signal",
    "run_batch",
    "run_single",
    "sensitivity",
    "snr_db",
    "spectrogram",
    "stats",
    "synthesize",
    "theta",
    "theta_at",
    "theta_closed_form",
    "theta_decomposition",
    "weak_value",
    "white_noise",
]
