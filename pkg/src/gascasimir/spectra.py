"""Atomic polarizabilities, dilute-medium permittivity, populations and widths.

Natural units (hbar = c = k_B = 1) throughout.  A dipole moment squared
carries units of frequency**-2, a polarizability frequency**-3 and a number
density frequency**3.

All polarizabilities are the orientation-averaged scalars: the dipole dyad
d d is replaced by |d|**2 / 3 times the identity before anything else is done.
Every function accepts scalar or array frequencies (complex allowed).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import BranchError, DomainError

__all__ = [
    "Transition",
    "AtomSpecies",
    "MediumSpec",
    "SpectralFunction",
    "lorentz_polarizability",
    "polarizability_ground",
    "polarizability_excited",
    "polarizability_multilevel",
    "atom_polarizability",
    "permittivity",
    "refractive_index",
    "boltzmann_populations",
    "collisional_width",
]


@dataclass(frozen=True)
class Transition:
    frequency: float
    dipole_sq: float
    width: float = 0.0

    def __post_init__(self):
        if not (self.frequency > 0 and math.isfinite(self.frequency)):
            raise DomainError(f"transition frequency must be finite and > 0, got {self.frequency!r}")
        if not self.dipole_sq >= 0:
            raise DomainError(f"dipole_sq must be >= 0, got {self.dipole_sq!r}")
        if not self.width >= 0:
            raise DomainError(f"width must be >= 0, got {self.width!r}")


@dataclass(frozen=True)
class AtomSpecies:
    """Transition data of a two-level or multi-level atom.

    ``natural_width`` and ``broadening_rate`` feed :func:`collisional_width`;
    the per-transition ``width`` is what the polarizability uses.
    """

    transitions: tuple
    natural_width: float = 0.0
    broadening_rate: float = 0.0

    def __post_init__(self):
        trs = tuple(t if isinstance(t, Transition) else Transition(*t) for t in self.transitions)
        object.__setattr__(self, "transitions", trs)
        if self.natural_width < 0:
            raise DomainError("natural_width must be >= 0")
        if self.broadening_rate < 0:
            raise DomainError("broadening_rate must be >= 0")

    @classmethod
    def two_level(cls, frequency, dipole_sq, width=0.0, natural_width=0.0, broadening_rate=0.0):
        return cls((Transition(frequency, dipole_sq, width),), natural_width, broadening_rate)

    @property
    def is_two_level(self) -> bool:
        return len(self.transitions) == 1

    @property
    def frequency(self) -> float:
        """Lowest transition frequency (the resonance used for populations)."""
        self._require_transitions()
        return min(t.frequency for t in self.transitions)

    @property
    def dipole_sq(self) -> float:
        return self._single().dipole_sq

    @property
    def width(self) -> float:
        return self._single().width

    def with_width(self, width: float) -> "AtomSpecies":
        """Copy with every transition width set to ``width``."""
        return replace(self, transitions=tuple(replace(t, width=width) for t in self.transitions))

    def with_width_floor(self, rel_floor: float) -> "AtomSpecies":
        """Copy where zero widths are replaced by ``rel_floor * frequency``."""
        trs = tuple(
            t if t.width > 0 else replace(t, width=rel_floor * t.frequency) for t in self.transitions
        )
        return replace(self, transitions=trs)

    def _require_transitions(self):
        if not self.transitions:
            raise DomainError("species has no transitions")

    def _single(self) -> Transition:
        self._require_transitions()
        if len(self.transitions) != 1:
            raise DomainError("two-level property requested on a multi-level species")
        return self.transitions[0]


@dataclass(frozen=True)
class SpectralFunction:
    """A complex function of complex frequency with an analyticity tag."""

    func: Callable
    analytic: str = "upper-half-plane"

    def __call__(self, omega):
        return self.func(omega)


def lorentz_polarizability(frequency, dipole_sq, width, omega):
    """Scalar Lorentzian polarizability of one transition.

    ``frequency`` may be negative: that is the excited-state form, obtained
    from the ground-state one by flipping the sign of the transition
    frequency.  The width keeps the retarded sign pattern in both denominators,
    so the result is analytic in the upper half plane.
    """
    omega = np.asarray(omega, dtype=complex)
    half = 0.5j * width
    d1 = frequency - omega - half
    d2 = frequency + omega + half
    if np.any(d1 == 0) or np.any(d2 == 0):
        raise DomainError("frequency coincides with an undamped pole of the polarizability")
    out = (dipole_sq / 3.0) * (1.0 / d1 + 1.0 / d2)
    return out[()] if out.ndim == 0 else out


def polarizability_ground(species: AtomSpecies, omega):
    t = species._single()
    return lorentz_polarizability(t.frequency, t.dipole_sq, t.width, omega)


def polarizability_excited(species: AtomSpecies, omega):
    t = species._single()
    return lorentz_polarizability(-t.frequency, t.dipole_sq, t.width, omega)


def polarizability_multilevel(species: AtomSpecies, omega, excited: bool = False):
    """Sum of Lorentzian terms over all transitions.

    With ``excited=True`` every transition frequency changes sign, i.e. the
    atom sits in the upper level of each listed transition.
    """
    species._require_transitions()
    sign = -1.0 if excited else 1.0
    total = 0
    for t in species.transitions:
        total = total + lorentz_polarizability(sign * t.frequency, t.dipole_sq, t.width, omega)
    return total


def atom_polarizability(species: AtomSpecies, state: str, omega):
    if state not in ("ground", "excited"):
        raise DomainError(f"state must be 'ground' or 'excited', got {state!r}")
    return polarizability_multilevel(species, omega, excited=(state == "excited"))


def boltzmann_populations(n0: float, omega_eg: float, T: float):
    """Ground and excited densities of a two-level gas in equilibrium.

    ``n_e`` is formed as ``n0 - n_g``; since ``n_g >= n0/2`` the subtraction
    is exact and ``n_g + n_e == n0`` holds bit for bit.
    """
    if n0 < 0:
        raise DomainError("density must be >= 0")
    if not omega_eg > 0:
        raise DomainError("transition frequency must be > 0")
    if T < 0:
        raise DomainError("temperature must be >= 0")
    if T == 0:
        return float(n0), 0.0
    boltz = math.exp(-omega_eg / T) if math.isfinite(T) else 1.0
    ng = n0 / (1.0 + boltz)
    return ng, n0 - ng


def collisional_width(species: AtomSpecies, n0: float) -> float:
    if n0 < 0:
        raise DomainError("density must be >= 0")
    return species.natural_width + n0 * species.broadening_rate


@dataclass(frozen=True)
class MediumSpec:
    """A dilute gas: one species at total density ``density``.

    Populations follow the Boltzmann law at ``temperature`` unless given
    explicitly.  ``eps_density`` selects which density enters the
    permittivity: the ground-state population (default) or the total.
    """

    species: AtomSpecies
    density: float = 0.0
    temperature: float = 0.0
    populations: Optional[tuple] = None
    eps_density: str = "ground"

    def __post_init__(self):
        if not self.density >= 0:
            raise DomainError(f"density must be >= 0, got {self.density!r}")
        if not self.temperature >= 0:
            raise DomainError(f"temperature must be >= 0, got {self.temperature!r}")
        if self.eps_density not in ("ground", "total"):
            raise DomainError("eps_density must be 'ground' or 'total'")
        if self.populations is not None:
            ng, ne = (float(p) for p in self.populations)
            if ng < 0 or ne < 0:
                raise DomainError("populations must be >= 0")
            if not math.isclose(ng + ne, self.density, rel_tol=1e-12, abs_tol=0.0):
                raise DomainError("populations must sum to the total density")
            object.__setattr__(self, "populations", (ng, ne))

    @classmethod
    def vacuum(cls, species: Optional[AtomSpecies] = None) -> "MediumSpec":
        return cls(species or AtomSpecies.two_level(1.0, 0.0), 0.0)

    @property
    def is_vacuum(self) -> bool:
        return self.density == 0

    def resolved_populations(self, T: Optional[float] = None):
        if self.populations is not None:
            return self.populations
        temp = self.temperature if T is None else T
        return boltzmann_populations(self.density, self.species.frequency, temp)

    @property
    def ground_density(self) -> float:
        return self.resolved_populations()[0]

    @property
    def excited_density(self) -> float:
        return self.resolved_populations()[1]

    def permittivity_density(self) -> float:
        return self.density if self.eps_density == "total" else self.ground_density

    def with_density(self, density: float) -> "MediumSpec":
        return replace(self, density=density, populations=None)


def permittivity(medium: MediumSpec, omega):
    omega = np.asarray(omega, dtype=complex)
    dens = medium.permittivity_density()
    if dens == 0:
        out = np.ones_like(omega)
    else:
        out = 1.0 + 4.0 * np.pi * dens * polarizability_multilevel(medium.species, omega)
    return out[()] if np.ndim(out) == 0 else out


def refractive_index(medium: MediumSpec, omega):
    """Complex refractive index n = sqrt(eps) of the medium.

    Principal square root: on the positive real axis Im eps >= 0 for a
    damped medium, so Im n >= 0, and on the imaginary axis eps is real and
    positive for a physical (passive) medium, giving n(iu) > 0.
    """
    eps = np.asarray(permittivity(medium, omega), dtype=complex)
    if np.any((eps.imag == 0) & (eps.real < 0)):
        raise BranchError("permittivity is real and negative; refractive index branch undefined")
    out = np.sqrt(eps)
    return out[()] if out.ndim == 0 else out


def medium_functions(medium: MediumSpec):
    """(epsilon, n) as SpectralFunction objects."""
    return (
        SpectralFunction(lambda w: permittivity(medium, w)),
        SpectralFunction(lambda w: refractive_index(medium, w)),
    )
