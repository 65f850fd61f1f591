"""Seeded noise synthesis: white, filtered colored, impulsive, and mixtures.

All stochastic noise derives from one frozen generator, numpy's PCG64,
so a (seed, spec, grid) triple is bit-reproducible. Physical scale enters
through snr_target_db: the finished trace is rescaled so its peak sits at
the requested dB ratio below the reference signal's peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.signal import lfilter

from .filters import CHAIN_G1, CHAIN_G2, CHAIN_G3, FilterSection, discretize_section
from .model import TimeGrid, Trace

__all__ = [
    "Seed",
    "ImpulsiveParams",
    "NoiseSpec",
    "NOISE_KINDS",
    "white_noise",
    "colored_noise",
    "impulsive_noise",
    "synthesize",
    "recipe_specs",
    "RECIPE_NAMES",
    "MIX_SEED_CH1",
    "MIX_SEED_CH2",
]

# Seeds are plain unsigned integers; the three-digit labels used in the
# shipped campaign tables map to ints by value (leading zeros drop).
Seed = int

NOISE_KINDS = ("White", "LowFreq", "MidFreq", "HighFreq", "Impulsive", "Mix")

# Fixed Gaussian-component seeds for the two channels of every mixture recipe.
MIX_SEED_CH1: Seed = 223
MIX_SEED_CH2: Seed = 751


@dataclass(frozen=True)
class ImpulsiveParams:
    """Three deterministic Gaussian bursts:
    sum_i gamma_i*(2*pi*zeta4^2)^(-1/4)*exp(-(t-c_i)^2/(kappa_i*zeta4^2))."""

    zeta4: float = 2.0e-4
    gammas: Tuple[float, float, float] = (15.0, 5.0, 9.0)
    centers: Tuple[float, float, float] = (0.00255, 0.0018, -0.00015)
    kappas: Tuple[float, float, float] = (0.0016, 0.0016, 0.0012)

    def __post_init__(self):
        if not (self.zeta4 > 0.0):
            raise ValueError(f"zeta4 must be positive, got {self.zeta4}")
        if any(k <= 0.0 for k in self.kappas):
            raise ValueError(f"kappas must be positive, got {self.kappas}")


@dataclass(frozen=True)
class NoiseSpec:
    """Recipe for one noise realization.

    kind selects the family; seed feeds the PRNG (ignored for Impulsive);
    sigma is the white-noise deviation before filtering; mix_terms lists
    (member spec, weight) pairs for Mix; snr_target_db, when set, rescales
    the finished trace against a reference signal supplied at synthesis.
    """

    kind: str
    seed: Optional[Seed] = None
    sigma: float = 1.0
    mix_terms: Tuple[Tuple["NoiseSpec", float], ...] = ()
    snr_target_db: Optional[float] = None
    impulsive: ImpulsiveParams = field(default_factory=ImpulsiveParams)

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {NOISE_KINDS}")
        if self.kind == "Mix":
            if len(self.mix_terms) < 2:
                raise ValueError("Mix needs at least 2 terms")
            if not all(math.isfinite(w) for _, w in self.mix_terms):
                raise ValueError("mix weights must be finite")
        if self.sigma < 0.0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")


def white_noise(grid: TimeGrid, seed: Seed, sigma: float) -> Trace:
    """i.i.d. Normal(0, sigma^2) samples from PCG64(seed).

    Drawn as standard normals and scaled afterwards, so amplitude is
    sample-exactly linear in sigma for a fixed seed.
    """
    if sigma < 0.0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    rng = np.random.Generator(np.random.PCG64(seed))
    return Trace(grid, rng.standard_normal(grid.n) * sigma)


def colored_noise(
    grid: TimeGrid, seed: Seed, sigma: float, chain: Sequence[FilterSection]
) -> Trace:
    """White noise passed through each discretized section in order,
    zero initial filter state."""
    if len(chain) == 0:
        raise ValueError("filter chain must be non-empty")
    x = white_noise(grid, seed, sigma).samples
    for sec in chain:
        d = discretize_section(sec, grid.dt)
        x = lfilter([d.c0, d.c1], [1.0, d.d1], x)
    return Trace(grid, x)


def impulsive_noise(grid: TimeGrid, p: ImpulsiveParams) -> Trace:
    """Deterministic burst noise; no seed dependence."""
    t = grid.times()
    amp = (2.0 * math.pi * p.zeta4**2) ** -0.25
    out = np.zeros(grid.n)
    for gamma, center, kappa in zip(p.gammas, p.centers, p.kappas):
        out += gamma * amp * np.exp(-((t - center) ** 2) / (kappa * p.zeta4**2))
    return Trace(grid, out)


def _raw_synthesize(grid: TimeGrid, spec: NoiseSpec, reference: Optional[Trace]) -> np.ndarray:
    if spec.kind == "White":
        return white_noise(grid, _require_seed(spec), spec.sigma).samples
    if spec.kind == "LowFreq":
        return colored_noise(grid, _require_seed(spec), spec.sigma, CHAIN_G1).samples
    if spec.kind == "MidFreq":
        return colored_noise(grid, _require_seed(spec), spec.sigma, CHAIN_G2).samples
    if spec.kind == "HighFreq":
        return colored_noise(grid, _require_seed(spec), spec.sigma, CHAIN_G3).samples
    if spec.kind == "Impulsive":
        return impulsive_noise(grid, spec.impulsive).samples
    # Mix: weighted sum of members, each synthesized (and SNR-scaled) on its own
    out = np.zeros(grid.n)
    for member, weight in spec.mix_terms:
        out = out + weight * synthesize(grid, member, reference).samples
    return out


def _require_seed(spec: NoiseSpec) -> Seed:
    if spec.seed is None:
        raise ValueError(f"noise kind {spec.kind} requires a seed")
    return spec.seed


def synthesize(grid: TimeGrid, spec: NoiseSpec, reference: Optional[Trace] = None) -> Trace:
    """Build the noise trace for a spec, applying snr_target_db last.

    The scaling convention is peak-ratio SNR: after scaling,
    20*log10(max|reference| / max|noise|) equals the target exactly.
    """
    out = _raw_synthesize(grid, spec, reference)
    if spec.snr_target_db is not None:
        if reference is None:
            raise ValueError("snr_target_db set but no reference signal supplied")
        peak_ref = float(np.max(np.abs(reference.samples)))
        peak_noise = float(np.max(np.abs(out)))
        if peak_ref == 0.0:
            raise ValueError("cannot target an SNR against an all-zero reference")
        if peak_noise == 0.0:
            raise ValueError("cannot SNR-scale an all-zero noise trace")
        out = out * (peak_ref * 10.0 ** (-spec.snr_target_db / 20.0) / peak_noise)
    return Trace(grid, out)


RECIPE_NAMES = (
    "none",
    "N0",
    "N1",
    "N2",
    "N3",
    "N4",
    "N1+1N0",
    "N1+2N0",
    "N1+3N0",
    "N4+N0",
    "N4+N1",
)

_STOCHASTIC_KIND = {"N0": "White", "N1": "LowFreq", "N2": "MidFreq", "N3": "HighFreq"}


def recipe_specs(
    name: str,
    seed_pair: Tuple[Seed, Seed],
    snr_db: float = -5.1,
    n4_snr_db: float = -23.5,
    sigma: float = 1.0,
) -> Tuple[Optional[NoiseSpec], Optional[NoiseSpec]]:
    """Per-channel NoiseSpec pair for a named recipe.

    Mixture conventions: every stochastic member is individually scaled to
    snr_db and the sum is left unscaled; the Gaussian component of the
    "N1+kN0" family always uses the fixed channel seeds 223 and 751 while
    the colored component's seed varies per measurement; "N4+..." pairs the
    impulsive trace at n4_snr_db with one stochastic member at snr_db.
    """
    if name == "none":
        return (None, None)

    def stochastic(kind: str, seed: Seed) -> NoiseSpec:
        return NoiseSpec(kind=kind, seed=seed, sigma=sigma, snr_target_db=snr_db)

    if name in _STOCHASTIC_KIND:
        kind = _STOCHASTIC_KIND[name]
        return (stochastic(kind, seed_pair[0]), stochastic(kind, seed_pair[1]))
    if name == "N4":
        n4 = NoiseSpec(kind="Impulsive", snr_target_db=n4_snr_db)
        return (n4, n4)
    if name in ("N1+1N0", "N1+2N0", "N1+3N0"):
        weight = float(name[3])
        out = []
        for seed, mix_seed in zip(seed_pair, (MIX_SEED_CH1, MIX_SEED_CH2)):
            terms = (
                (stochastic("LowFreq", seed), 1.0),
                (stochastic("White", mix_seed), weight),
            )
            out.append(NoiseSpec(kind="Mix", mix_terms=terms))
        return (out[0], out[1])
    if name in ("N4+N0", "N4+N1"):
        kind = "White" if name.endswith("N0") else "LowFreq"
        n4 = NoiseSpec(kind="Impulsive", snr_target_db=n4_snr_db)
        out = []
        for seed in seed_pair:
            terms = ((n4, 1.0), (stochastic(kind, seed), 1.0))
            out.append(NoiseSpec(kind="Mix", mix_terms=terms))
        return (out[0], out[1])
    raise ValueError(f"unknown noise recipe {name!r}; expected one of {RECIPE_NAMES}")
