"""Pair potentials U(R) between an (excited or ground-state) atom A and a
ground-state atom B embedded in a dilute absorbing medium.

Three representations are available:

* real frequency axis (zero or finite temperature, coth weight),
* imaginary frequency axis (zero temperature, fluctuation part only),
* Matsubara sum (finite temperature).

The fluctuation (non-resonant) part and the real-photon (resonant) part are
always reported separately; the resonant part exists only for excited A.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import DomainError
from .greens import phased_kernel, res_kernel
from .quad import QuadratureSpec, integrate_interval, integrate_semiaxis, matsubara_sum
from .spectra import AtomSpecies, MediumSpec, atom_polarizability, polarizability_multilevel, refractive_index

__all__ = [
    "PairConfig",
    "PairPotentialResult",
    "DEFAULT_WIDTH_FLOOR",
    "potential_T0",
    "potential_T0_ground_ground",
    "potential_finite_T",
    "potential_matsubara",
    "nonres_imaginary_axis",
    "resonant_term",
    "asymptotic_potential",
    "eq27_nonretarded_vacuum",
    "eq28_retarded_vacuum",
    "eq30_nonretarded_medium",
    "eq31_retarded_medium",
    "nonretarded_vacuum_full",
    "divergence_probe",
]

DEFAULT_WIDTH_FLOOR = 1e-6


@dataclass(frozen=True)
class PairConfig:
    species_A: AtomSpecies
    species_B: AtomSpecies
    separation: float
    state_A: str = "excited"
    medium: Optional[MediumSpec] = None
    temperature: float = 0.0

    def __post_init__(self):
        if not (self.separation > 0 and math.isfinite(self.separation)):
            raise DomainError(f"separation must be finite and > 0, got {self.separation!r}")
        if self.state_A not in ("ground", "excited"):
            raise DomainError("state_A must be 'ground' or 'excited'")
        if not self.temperature >= 0:
            raise DomainError("temperature must be >= 0")

    @property
    def R(self) -> float:
        return self.separation

    @property
    def excited(self) -> bool:
        return self.state_A == "excited"

    def n_of(self, omega):
        if self.medium is None or self.medium.is_vacuum:
            return np.ones_like(np.asarray(omega, dtype=complex))
        return refractive_index(self.medium, omega)

    def with_width_floor(self, rel_floor: float) -> "PairConfig":
        medium = self.medium
        if medium is not None and not medium.is_vacuum:
            medium = replace(medium, species=medium.species.with_width_floor(rel_floor))
        return replace(
            self,
            species_A=self.species_A.with_width_floor(rel_floor),
            species_B=self.species_B.with_width_floor(rel_floor),
            medium=medium,
        )

    def breakpoints(self):
        pts = [t.frequency for t in self.species_A.transitions]
        pts += [t.frequency for t in self.species_B.transitions]
        if self.medium is not None and not self.medium.is_vacuum:
            pts += [t.frequency for t in self.medium.species.transitions]
        return tuple(sorted(set(pts)))


@dataclass(frozen=True)
class PairPotentialResult:
    total: float
    nonres: float
    res: float
    error: float = 0.0
    evaluations: int = 0
    method: str = ""
    width_floor: Optional[float] = None
    extra: dict = field(default_factory=dict)


def _alpha_A(cfg: PairConfig, omega):
    return atom_polarizability(cfg.species_A, cfg.state_A, omega)


def _alpha_B(cfg: PairConfig, omega):
    return polarizability_multilevel(cfg.species_B, omega)


def _coth(z):
    return 1.0 / np.tanh(z)


def resonant_term(cfg: PairConfig, R=None):
    """Real-photon contribution, zero for a ground-state A.

    -(2/3) sum_m |d_m|^2 coth(w_m/2T) Re[alpha_B(w_m) g(n w_m R)] w_m^4/R^2
    exp(-2 Im n(w_m) w_m R), summed over the transitions of A.  ``R`` may be
    an array; defaults to the configured separation.
    """
    R = np.asarray(cfg.R if R is None else R, dtype=float)
    if np.any(R <= 0):
        raise DomainError("separation must be > 0")
    out = np.zeros_like(R)
    if not cfg.excited:
        return out[()] if out.ndim == 0 else out
    for t in cfg.species_A.transitions:
        w = t.frequency
        n = complex(cfg.n_of(w))
        weight = 1.0 if cfg.temperature == 0 else float(_coth(w / (2 * cfg.temperature)))
        aB = complex(_alpha_B(cfg, w))
        g = res_kernel(n * w * R)
        decay = np.exp(-2.0 * n.imag * w * R)
        out = out - (2.0 / 3.0) * t.dipole_sq * weight * np.real(aB * g) * w**4 / R**2 * decay
    return out[()] if out.ndim == 0 else out


def _real_axis_integrand(cfg: PairConfig):
    R, T = cfg.R, cfg.temperature

    def f(w):
        n = cfg.n_of(w)
        # w^4 f(x) e^{2ix} / R^2 = phased_kernel(x) / (n^4 R^6)
        kern = phased_kernel(n * w * R) / (n**4 * R**6)
        val = _alpha_A(cfg, w) * _alpha_B(cfg, w) * kern
        if T > 0:
            val = val * _coth(w / (2 * T))
        # only Re(i * integral) is physical; Re(integrand) ~ 1/w at w -> 0 when T > 0
        return -val.imag

    return f


def _real_axis_spec(cfg: PairConfig, spec: Optional[QuadratureSpec]):
    spec = spec or QuadratureSpec()
    n_hi = complex(cfg.n_of(10.0 * max(cfg.breakpoints())))
    return replace(spec, breakpoints=tuple(spec.breakpoints) + cfg.breakpoints(),
                   oscillation_scale=2.0 * max(n_hi.real, 1e-300) * cfg.R)


def potential_finite_T(cfg: PairConfig, spec: Optional[QuadratureSpec] = None,
                       width_floor: float = DEFAULT_WIDTH_FLOOR) -> PairPotentialResult:
    """Real-frequency-axis potential with thermal weight coth(w/2T).

    At T = 0 the weight is 1.  Undamped transitions get the width
    ``width_floor * frequency`` because the real-axis integrand has poles on
    the axis otherwise; the floor actually applied is recorded.
    """
    floored = cfg.with_width_floor(width_floor)
    used = width_floor if floored != cfg else None
    q = integrate_semiaxis(_real_axis_integrand(floored), _real_axis_spec(floored, spec))
    nonres = float(q.value.real / math.pi)
    res = float(resonant_term(floored))
    return PairPotentialResult(nonres + res, nonres, res, q.error / math.pi, q.evals,
                               "real-axis", used)


def potential_T0(cfg: PairConfig, spec: Optional[QuadratureSpec] = None,
                 width_floor: float = DEFAULT_WIDTH_FLOOR) -> PairPotentialResult:
    if cfg.temperature != 0:
        raise DomainError("potential_T0 requires temperature == 0")
    return potential_finite_T(cfg, spec, width_floor)


def _imag_axis_terms(cfg: PairConfig):
    R = cfg.R

    def g(u):
        u = np.asarray(u, dtype=float)
        iu = 1j * u
        n = cfg.n_of(iu)
        s = 1.0 / (n * R)
        poly = u**4 + s * (2 * u**3 + s * (5 * u**2 + s * (6 * u + 3 * s)))
        return _alpha_A(cfg, iu) * _alpha_B(cfg, iu) * poly / R**2 * np.exp(-2.0 * n * u * R)

    return g


def nonres_imaginary_axis(cfg: PairConfig, spec: Optional[QuadratureSpec] = None):
    """Zero-temperature fluctuation part on the imaginary axis: (value, QuadResult)."""
    spec = spec or QuadratureSpec()
    spec = replace(spec, breakpoints=tuple(spec.breakpoints) + cfg.breakpoints() + (1.0 / cfg.R,),
                   oscillation_scale=None)
    q = integrate_semiaxis(_imag_axis_terms(cfg), spec)
    return float((-q.value / math.pi).real), q


def potential_T0_ground_ground(cfg: PairConfig, spec: Optional[QuadratureSpec] = None) -> PairPotentialResult:
    if cfg.excited:
        raise DomainError("potential_T0_ground_ground requires state_A == 'ground'")
    val, q = nonres_imaginary_axis(cfg, spec)
    return PairPotentialResult(val, val, 0.0, q.error / math.pi, q.evals, "imaginary-axis")


def potential_matsubara(cfg: PairConfig, spec: Optional[QuadratureSpec] = None) -> PairPotentialResult:
    """Finite-temperature potential as a Matsubara sum plus the resonant term."""
    if not cfg.temperature > 0:
        raise DomainError("potential_matsubara requires temperature > 0")
    spec = spec or QuadratureSpec()
    T = cfg.temperature
    ms = matsubara_sum(_imag_axis_terms(cfg), T, replace(spec, abs_tol=spec.abs_tol / (2 * T)))
    nonres = float((-2.0 * T * ms.value).real)
    res = float(resonant_term(cfg))
    return PairPotentialResult(nonres + res, nonres, res, 2 * T * ms.tail_bound, ms.n_terms,
                               "matsubara", extra={"n_terms": ms.n_terms})


# ---------------------------------------------------------------- closed forms

def _check_distinct(wA, wB):
    if wA == wB:
        raise DomainError("closed form has a pole at omega_A == omega_B (resonant degeneracy)")


def eq27_nonretarded_vacuum(dA2, dB2, wA, wB, R):
    """Short-range excited-ground potential (real-photon term only)."""
    _check_distinct(wA, wB)
    return -(4.0 / 3.0) * dA2 * dB2 * wB / ((wB**2 - wA**2) * R**6)


def eq28_retarded_vacuum(dA2, dB2, wA, wB, R):
    _check_distinct(wA, wB)
    return -(4.0 / 9.0) * dA2 * dB2 * wB * wA**4 / ((wB**2 - wA**2) * R**2)


def nonretarded_vacuum_full(dA2, dB2, wA, wB, R):
    """Short-range excited-ground potential including the fluctuation part.

    Resonant piece -(4/3)|dA|^2|dB|^2 wB/((wB^2-wA^2)R^6) plus the London term
    of the excited atom +(2/3)|dA|^2|dB|^2/((wA+wB)R^6).
    """
    _check_distinct(wA, wB)
    return -(2.0 / 3.0) * dA2 * dB2 / ((wB - wA) * R**6)


def eq30_nonretarded_medium(alpha_A, alpha_B, n_fn, R, spec: Optional[QuadratureSpec] = None,
                            breakpoints=()):
    """-(3/pi R^6) Re int alpha_A(iu) alpha_B(iu) / n(iu)^4 du; callables take u."""
    spec = replace(spec or QuadratureSpec(), breakpoints=tuple(breakpoints), oscillation_scale=None)
    q = integrate_semiaxis(lambda u: alpha_A(u) * alpha_B(u) / n_fn(u) ** 4, spec)
    return float(-(3.0 / (math.pi * R**6)) * q.value.real)


def eq31_retarded_medium(alpha_A0, alpha_B0, n0, R):
    return -23.0 * alpha_A0 * alpha_B0 / (4.0 * math.pi * n0**5 * R**7)


_REGIMES = {
    "nonretarded_vacuum_exc": eq27_nonretarded_vacuum,
    "retarded_vacuum_exc": eq28_retarded_vacuum,
    "nonretarded_medium_gg": eq30_nonretarded_medium,
    "retarded_medium_gg": eq31_retarded_medium,
}


def asymptotic_potential(regime: str, **params):
    try:
        fn = _REGIMES[regime]
    except KeyError:
        raise DomainError(f"unknown regime {regime!r}; expected one of {sorted(_REGIMES)}") from None
    return fn(**params)


# ---------------------------------------------------------------- half-space probe

def divergence_probe(species_A: AtomSpecies, medium: MediumSpec, z0: float, cutoffs,
                     perturbative: bool = False, spec: Optional[QuadratureSpec] = None):
    """Energy of an excited atom at distance ``z0`` from a half-space of
    ground-state atoms, pair potentials summed inside a sphere of radius R_cut.

    Returns a list of (R_cut, U).  The perturbative kernel is the retarded
    vacuum R^-2 law; otherwise the real-photon term with the medium's
    absorption factor exp(-2 Im n(w_A) w_A R) is used.
    """
    if not z0 > 0:
        raise DomainError("z0 must be > 0")
    spec = spec or QuadratureSpec(rel_tol=1e-12, abs_tol=1e-300)
    sB = medium.species
    n0 = medium.density
    wA, dA2 = species_A.frequency, species_A.dipole_sq
    if perturbative:
        def U(r):
            return eq28_retarded_vacuum(dA2, sB.dipole_sq, wA, sB.frequency, r)
        lph = math.inf
    else:
        cfg = PairConfig(species_A, sB, 1.0, "excited", medium)

        def U(r):
            return resonant_term(cfg, r)
        im = complex(refractive_index(medium, wA)).imag
        lph = 1.0 / (2.0 * im * wA) if im > 0 else math.inf

    def integrand(r):
        return 2.0 * math.pi * n0 * r * (r - z0) * U(r)

    rows = []
    for rc in cutoffs:
        if rc <= z0:
            rows.append((float(rc), 0.0))
            continue
        pts = np.geomspace(z0, rc, 40)[1:-1].tolist()
        if math.isfinite(lph):
            pts += [p for p in np.arange(z0, rc, lph)[1:2000].tolist()]
        q = integrate_interval(integrand, z0, rc, spec, points=sorted(pts))
        rows.append((float(rc), float(q.value.real)))
    return rows
