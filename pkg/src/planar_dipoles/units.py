"""Conversion from laboratory quantities to the dimensionless ω/B and Ω/B.

Constants come from scipy.constants (CODATA 2022 as of scipy 1.15; c and h
are exact SI values).
"""

import math
from dataclasses import dataclass

from scipy import constants

DEBYE = 1e-21 / constants.c  # C·m
HC_PER_CM = constants.h * constants.c * 100.0  # J per cm⁻¹


@dataclass(frozen=True)
class PhysicalParams:
    """Dipole moment [D], field strength [kV/cm], separation [nm], B [cm⁻¹]."""

    dipole_moment: float
    field_strength: float
    separation: float
    rotational_constant: float

    def __post_init__(self):
        for name in ("dipole_moment", "field_strength", "separation", "rotational_constant"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")


def convert_units(phys: PhysicalParams) -> tuple[float, float]:
    """Return (ω/B, Ω/B) with ω = μ·E and Ω = μ²/(4πϵ0 r³)."""
    mu = phys.dipole_moment * DEBYE
    b_joule = phys.rotational_constant * HC_PER_CM
    omega = mu * phys.field_strength * 1e5 / b_joule  # kV/cm -> V/m
    r = phys.separation * 1e-9
    coupling = mu * mu / (4 * math.pi * constants.epsilon_0 * r**3) / b_joule
    return omega, coupling
