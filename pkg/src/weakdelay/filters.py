"""First-order analog filter sections and their bilinear discretization.

The colored-noise chains are products of first-order sections
H(s) = (b0*s + b1)/(s + a1). Discretization uses the Tustin substitution
s <- (2/dt)*(1 - z^-1)/(1 + z^-1), which maps s=0 to z=1 and therefore
preserves DC gain exactly (b1/a1).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

__all__ = [
    "FilterSection",
    "DiscreteSection",
    "discretize_section",
    "G11",
    "G21",
    "G22",
    "G23",
    "G31",
    "CHAIN_G1",
    "CHAIN_G2",
    "CHAIN_G3",
]


@dataclass(frozen=True)
class FilterSection:
    """Continuous-time section H(s) = (b0*s + b1)/(s + a1)."""

    b0: float
    b1: float
    a1: float

    def __post_init__(self):
        if not (self.a1 > 0.0):
            raise ValueError(f"a1 must be positive for a stable pole, got {self.a1}")

    def response(self, omega: float) -> complex:
        """Analog frequency response H(j*omega)."""
        s = 1j * omega
        return (self.b0 * s + self.b1) / (s + self.a1)

    def dc_gain(self) -> float:
        return self.b1 / self.a1


@dataclass(frozen=True)
class DiscreteSection:
    """Recurrence y[k] = c0*x[k] + c1*x[k-1] - d1*y[k-1], zero initial state."""

    c0: float
    c1: float
    d1: float
    dt: float

    def response(self, omega: float) -> complex:
        """Discrete response at z = exp(j*omega*dt)."""
        zinv = cmath.exp(-1j * omega * self.dt)
        return (self.c0 + self.c1 * zinv) / (1.0 + self.d1 * zinv)

    def dc_gain(self) -> float:
        return (self.c0 + self.c1) / (1.0 + self.d1)


def discretize_section(sec: FilterSection, dt: float) -> DiscreteSection:
    """Bilinear (Tustin) transform of one first-order section.

    Substituting s = K*(1-z^-1)/(1+z^-1) with K = 2/dt into H(s) and
    collecting powers of z^-1 gives

        c0 = (b0*K + b1) / (K + a1)
        c1 = (b1 - b0*K) / (K + a1)
        d1 = (a1 - K)    / (K + a1)

    For a1 > 0 and dt > 0 the discrete pole -d1 always lies inside the
    unit circle; the guard below is defensive.
    """
    if not (dt > 0.0):
        raise ValueError(f"dt must be positive, got {dt}")
    k = 2.0 / dt
    denom = k + sec.a1
    c0 = (sec.b0 * k + sec.b1) / denom
    c1 = (sec.b1 - sec.b0 * k) / denom
    d1 = (sec.a1 - k) / denom
    if abs(d1) >= 1.0:
        raise ValueError(f"discretization produced an unstable pole |d1|={abs(d1)} >= 1")
    return DiscreteSection(c0=c0, c1=c1, d1=d1, dt=dt)


# The five named sections of the noise chains.
G11 = FilterSection(b0=0.0, b1=1000.0, a1=100.0)     # low-pass, DC gain 10
G21 = FilterSection(b0=1.0, b1=0.0, a1=40000.0)      # high-pass
G22 = FilterSection(b0=0.0, b1=10000.0, a1=10000.0)  # low-pass, DC gain 1
G23 = FilterSection(b0=0.0, b1=83000.0, a1=10000.0)  # low-pass, DC gain 8.3
G31 = FilterSection(b0=1.0, b1=0.0, a1=8000.0)       # high-pass

CHAIN_G1 = (G11, G11)
CHAIN_G2 = (G21, G21, G22, G23)
CHAIN_G3 = (G31, G31)
