"""SI <-> natural unit conversion at the command-line boundary.

Internally hbar = c = k_B = 1 and every quantity is measured in powers of a
reference angular frequency ``omega_ref`` (rad/s): frequencies in units of
omega_ref, lengths in units of c/omega_ref, and so on.  Dipole moments use
Gaussian electrostatics, i.e. |d|^2 -> |d|^2 / (4 pi eps0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants as sc

from .errors import DomainError

__all__ = ["UnitSystem", "QUANTITIES", "CONSTANTS"]

CONSTANTS = {
    "hbar": sc.hbar,
    "c": sc.c,
    "k_B": sc.k,
    "epsilon_0": sc.epsilon_0,
}

# SI unit of each quantity, and the power of the reference frequency that it
# carries in natural units (positive = frequency-like)
QUANTITIES = {
    "frequency": "rad/s",
    "length": "m",
    "density": "m^-3",
    "density_cm3": "cm^-3",
    "temperature": "K",
    "dipole": "C m",
    "dipole_sq": "C^2 m^2",
    "broadening_rate": "m^3/s",
    "energy": "J",
    "force_per_area": "Pa",
}


@dataclass(frozen=True)
class UnitSystem:
    omega_ref: float

    def __post_init__(self):
        if not (self.omega_ref > 0 and math.isfinite(self.omega_ref)):
            raise DomainError("omega_ref must be finite and > 0")

    def unit(self, quantity: str) -> float:
        """SI value of one natural unit of ``quantity``."""
        w = self.omega_ref
        ell = sc.c / w  # natural length in m
        gauss = 4 * math.pi * sc.epsilon_0 * sc.hbar * sc.c
        units = {
            "frequency": w,
            "length": ell,
            "density": ell**-3,
            "density_cm3": 1e-6 * ell**-3,
            "temperature": sc.hbar * w / sc.k,
            "dipole": math.sqrt(gauss) * ell,
            "dipole_sq": gauss * ell**2,
            "broadening_rate": ell**3 * w,
            "energy": sc.hbar * w,
            "force_per_area": sc.hbar * w / ell**3,
        }
        try:
            return units[quantity]
        except KeyError:
            raise DomainError(f"unknown quantity {quantity!r}; known: {sorted(QUANTITIES)}") from None

    def to_natural(self, quantity: str, value):
        return value / self.unit(quantity)

    def to_si(self, quantity: str, value):
        return value * self.unit(quantity)

    def metadata(self) -> dict:
        return {
            "omega_ref_rad_per_s": self.omega_ref,
            "constants": dict(CONSTANTS),
            "si_units": dict(QUANTITIES),
            "si_value_of_natural_unit": {q: self.unit(q) for q in QUANTITIES},
        }
