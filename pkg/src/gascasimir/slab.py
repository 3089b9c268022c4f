"""Force per unit area between two half-spaces of dilute two-level gases.

Sign convention: F > 0 is attraction.

The media are two-level gases; ``medium_A`` consists of atoms A (transition
w_A), ``medium_B`` of atoms B.  Widths are collisional,
gamma = gamma_nat + n0 * k_br.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import DomainError
from .pairpot import PairConfig, potential_matsubara, resonant_term
from .quad import QuadratureSpec, integrate_interval, integrate_semiaxis
from .spectra import MediumSpec, boltzmann_populations, collisional_width, refractive_index

__all__ = [
    "SlabConfig",
    "SlabForceResult",
    "PairwiseForce",
    "FORCE_MODES",
    "mean_free_paths",
    "mean_free_paths_exact",
    "force_components",
    "force_lifshitz",
    "force_total",
    "highT_balance_density",
    "pairwise_halfspace_force",
    "resonant_bracket",
    "validity_flags",
]

FORCE_MODES = ("explicit_Eq43", "reduced_Eq47", "highT_Eq48")

# "much greater than" is read as a factor of 10
_MARGIN = 10.0


@dataclass(frozen=True)
class SlabConfig:
    """Two half-spaces separated by ``separation`` at temperature ``temperature``.

    Populations are Boltzmann at ``temperature`` unless a medium carries
    explicit ones.  ``mfp_density`` picks the density in the mean-free-path
    formulas ("total" or "ground"); ``symmetric_width`` gives each resonant
    channel the Lorentzian width of its absorbing partner.
    """

    medium_A: MediumSpec
    medium_B: MediumSpec
    separation: float
    temperature: float
    mfp_density: str = "total"
    symmetric_width: bool = False

    def __post_init__(self):
        if not (self.separation > 0 and math.isfinite(self.separation)):
            raise DomainError(f"separation must be finite and > 0, got {self.separation!r}")
        if not self.temperature > 0:
            raise DomainError(f"temperature must be > 0, got {self.temperature!r}")
        if self.mfp_density not in ("total", "ground"):
            raise DomainError("mfp_density must be 'total' or 'ground'")
        for m in (self.medium_A, self.medium_B):
            if not m.species.is_two_level:
                raise DomainError("slab media must be two-level gases")

    @property
    def L(self) -> float:
        return self.separation

    @property
    def T(self) -> float:
        return self.temperature

    def populations(self, which: str):
        m = self.medium_A if which == "A" else self.medium_B
        if m.populations is not None:
            return m.populations
        return boltzmann_populations(m.density, m.species.frequency, self.temperature)

    def boltzmann(self, which: str):
        m = self.medium_A if which == "A" else self.medium_B
        return boltzmann_populations(m.density, m.species.frequency, self.temperature)

    def width(self, which: str) -> float:
        m = self.medium_A if which == "A" else self.medium_B
        return collisional_width(m.species, m.density)

    def swapped(self) -> "SlabConfig":
        return replace(self, medium_A=self.medium_B, medium_B=self.medium_A)


@dataclass(frozen=True)
class SlabForceResult:
    total: float
    res: float
    nres: float
    lifshitz: float
    L_ph1: float
    L_ph2: float
    validity: dict = field(default_factory=dict)
    mode: str = ""


@dataclass(frozen=True)
class PairwiseForce:
    res: float
    nres: float
    L_ph1: float
    L_ph2: float
    evaluations: int = 0


def _params(cfg: SlabConfig):
    a, b = cfg.medium_A.species, cfg.medium_B.species
    return a.frequency, b.frequency, a.dipole_sq, b.dipole_sq


def mean_free_paths(cfg: SlabConfig):
    """(L_ph1, L_ph2) from the closed Lorentzian forms.

    L_ph1 = 3[(wB^2-wA^2)^2 + (gB wA)^2] / (4 pi nB |dB|^2 gB wA^2), L_ph2 the
    A <-> B mirror.  A zero width or zero density gives ``math.inf``.
    """
    wA, wB, dA2, dB2 = _params(cfg)
    gA, gB = cfg.width("A"), cfg.width("B")
    if cfg.mfp_density == "total":
        nA, nB = cfg.medium_A.density, cfg.medium_B.density
    else:
        nA, nB = cfg.populations("A")[0], cfg.populations("B")[0]
    delta2 = (wB**2 - wA**2) ** 2

    def one(n, d2, g, w_probe, w_other_term):
        den = 4 * math.pi * n * d2 * g * w_probe**2
        if den == 0:
            return math.inf
        return 3 * (delta2 + w_other_term**2) / den

    return one(nB, dB2, gB, wA, gB * wA), one(nA, dA2, gA, wB, gA * wB)


def mean_free_paths_exact(cfg: SlabConfig):
    """(L_ph1, L_ph2) = 1/(2 Im n(w) w) with n from each medium's permittivity.

    L_ph1: photons at w_A absorbed in medium B; L_ph2: photons at w_B in A.
    """
    wA, wB, _, _ = _params(cfg)
    dens = "total" if cfg.mfp_density == "total" else "ground"

    def one(which, w):
        m = cfg.medium_A if which == "A" else cfg.medium_B
        sp = m.species.with_width(cfg.width(which))
        med = replace(m, species=sp, eps_density=dens,
                      populations=m.populations or cfg.boltzmann(which))
        im = complex(refractive_index(med, w)).imag
        return 1.0 / (2.0 * im * w) if im > 0 else math.inf

    return one("B", wA), one("A", wB)


def validity_flags(cfg: SlabConfig, L_ph1: float, L_ph2: float) -> dict:
    wA, wB, _, _ = _params(cfg)
    lam = 2 * math.pi / min(wA, wB)
    lph = max(L_ph1, L_ph2)
    return {
        "LT>>1": cfg.L * cfg.T >= _MARGIN,
        "L>>lambda": cfg.L >= _MARGIN * lam,
        "L>>L_ph": math.isfinite(lph) and cfg.L >= _MARGIN * lph,
    }


def _coth(x):
    return 1.0 / math.tanh(x)


def force_lifshitz(cfg: SlabConfig) -> float:
    wA, wB, dA2, dB2 = _params(cfg)
    T, L = cfg.T, cfg.L
    n0A, n0B = cfg.medium_A.density, cfg.medium_B.density
    return (2 * math.pi * T / (9 * L**3)) * dB2 * dA2 * n0A * n0B / (wA * wB) \
        * math.tanh(wA / (2 * T)) * math.tanh(wB / (2 * T))


def resonant_bracket(cfg: SlabConfig) -> float:
    """w_A^3 n_A^e n_B^g coth(w_A/2T) - w_B^3 n_A^g n_B^e coth(w_B/2T).

    Odd under A <-> B; the force itself is even because it also carries
    the factor (w_B^2 - w_A^2).
    """
    wA, wB, _, _ = _params(cfg)
    (nAg, nAe), (nBg, nBe) = cfg.populations("A"), cfg.populations("B")
    T = cfg.T
    return wA**3 * nAe * nBg * _coth(wA / (2 * T)) - wB**3 * nAg * nBe * _coth(wB / (2 * T))


def _resonant(cfg: SlabConfig, pops_A, pops_B, L_ph1, L_ph2) -> float:
    wA, wB, dA2, dB2 = _params(cfg)
    T, L = cfg.T, cfg.L
    nAg, nAe = pops_A
    nBg, nBe = pops_B
    delta = wB**2 - wA**2
    if (nAe == 0 and nBe == 0) or delta == 0:
        return 0.0
    gA, gB = cfg.width("A"), cfg.width("B")
    termA = wA**3 * nAe * nBg * _coth(wA / (2 * T))
    termB = wB**3 * nAg * nBe * _coth(wB / (2 * T))
    if cfg.symmetric_width:
        bracket = termA / (delta**2 + (gB * wA) ** 2) - termB / (delta**2 + (gA * wB) ** 2)
    else:
        den = delta**2 + (gB * wA) ** 2
        if den == 0:
            raise DomainError("resonant Lorentzian is singular (w_A == w_B with zero width)")
        bracket = (termA - termB) / den
    if bracket == 0:
        return 0.0
    if not (math.isfinite(L_ph1) and math.isfinite(L_ph2)):
        raise DomainError("infinite photon mean free path: the resonant force is undefined")
    return (4 * math.pi / 9) * (L_ph1 * L_ph2 / L) * dA2 * dB2 * wB * wA * delta * bracket


def force_components(cfg: SlabConfig):
    """(F_res, F_nres, F_Lif) with the configured (or Boltzmann) populations."""
    wA, wB, dA2, dB2 = _params(cfg)
    T, L = cfg.T, cfg.L
    pA, pB = cfg.populations("A"), cfg.populations("B")
    L1, L2 = mean_free_paths(cfg)
    f_res = _resonant(cfg, pA, pB, L1, L2)
    a0A, a0B = 2 * dA2 / (3 * wA), 2 * dB2 / (3 * wB)
    f_nres = (math.pi / (2 * L**3)) * T * a0A * a0B * (pA[0] - pA[1]) * (pB[0] - pB[1])
    return f_res, f_nres, force_lifshitz(cfg)


def _reduced_correction(cfg: SlabConfig, high_T: bool) -> float:
    wA, wB, _, _ = _params(cfg)
    T, L = cfg.T, cfg.L
    n0A, n0B = cfg.medium_A.density, cfg.medium_B.density
    kA, kB = cfg.medium_A.species.broadening_rate, cfg.medium_B.species.broadening_rate
    if n0A == 0 or n0B == 0:
        raise DomainError("reduced forms need nonzero densities (mean-free-path condition fails at n0 = 0)")
    if kA == 0 or kB == 0:
        raise DomainError("reduced forms need nonzero broadening rates")
    delta = wB**2 - wA**2
    if delta == 0:
        return 0.0
    if high_T:
        return -T * delta**4 / (8 * math.pi * L * wA * wB * n0A * n0B * kA * kB)
    eA, eB = math.exp(-wA / T), math.exp(-wB / T)
    bracket = wA**3 * eA * _coth(wA / (2 * T)) - wB**3 * eB * _coth(wB / (2 * T))
    return delta**3 * bracket / (4 * math.pi * L * wA * wB * n0A * n0B * kA * kB * (1 + eA) * (1 + eB))


def force_total(cfg: SlabConfig, mode: str = "reduced_Eq47") -> SlabForceResult:
    """Total force with Boltzmann populations.

    explicit_Eq43: Lifshitz term plus the resonant force with mean free paths;
    reduced_Eq47: mean free paths substituted, natural widths neglected;
    highT_Eq48: T >> w_A, w_B limit of the reduced form.
    """
    if mode not in FORCE_MODES:
        raise DomainError(f"mode must be one of {FORCE_MODES}, got {mode!r}")
    L1, L2 = mean_free_paths(cfg)
    f_lif = force_lifshitz(cfg)
    pA, pB = cfg.boltzmann("A"), cfg.boltzmann("B")
    wA, wB, dA2, dB2 = _params(cfg)
    T, L = cfg.T, cfg.L
    f_nres = (math.pi / (2 * L**3)) * T * (2 * dA2 / (3 * wA)) * (2 * dB2 / (3 * wB)) \
        * (pA[0] - pA[1]) * (pB[0] - pB[1])
    if mode == "explicit_Eq43":
        f_res = _resonant(cfg, pA, pB, L1, L2)
    else:
        f_res = _reduced_correction(cfg, high_T=(mode == "highT_Eq48"))
    return SlabForceResult(f_lif + f_res, f_res, f_nres, f_lif, L1, L2,
                           validity_flags(cfg, L1, L2), mode)


def highT_balance_density(cfg: SlabConfig) -> float:
    """Common density n0A = n0B at which the two high-temperature terms cancel.

    F_Lif = a n^2 and the correction = -b / n^2, so n* = (b/a)^(1/4).
    """
    wA, wB, dA2, dB2 = _params(cfg)
    T, L = cfg.T, cfg.L
    kA, kB = cfg.medium_A.species.broadening_rate, cfg.medium_B.species.broadening_rate
    a = (2 * math.pi * T / (9 * L**3)) * dA2 * dB2 / (wA * wB) \
        * math.tanh(wA / (2 * T)) * math.tanh(wB / (2 * T))
    b = T * (wB**2 - wA**2) ** 4 / (8 * math.pi * L * wA * wB * kA * kB)
    return (b / a) ** 0.25


# ---------------------------------------------------------------- pairwise model

def _slab_weight(t, a, b):
    """Length of {z1 in [0,a], z2 in [0,b] : z1 + z2 = t}."""
    return np.clip(np.minimum(np.minimum(t, a), np.minimum(b, a + b - t)), 0.0, None)


def pairwise_halfspace_force(cfg: SlabConfig, spec: Optional[QuadratureSpec] = None,
                             mfp: str = "exact") -> PairwiseForce:
    """Numerical force from summing pair potentials over the two media.

    Fluctuation part: full half-spaces, F = -2 pi sum n_i n_j
    int_L^inf (R - L) R U_ij(R) dR over the four (ground/excited) pairings, with
    vacuum Matsubara pair potentials.  Resonant part: each medium truncated at
    depth L_ph (A at L_ph2, B at L_ph1) with the absorption exponential
    dropped, F = -2 pi sum n_i n_j int_0^{a+b} w(t) (L+t) U(L+t) dt, where
    w(t) is the trapezoidal thickness weight.
    """
    spec = spec or QuadratureSpec(abs_tol=1e-300, rel_tol=1e-10)
    L, T = cfg.L, cfg.T
    sA, sB = cfg.medium_A.species, cfg.medium_B.species
    pA, pB = cfg.populations("A"), cfg.populations("B")
    gA, gB = cfg.width("A"), cfg.width("B")
    spA, spB = sA.with_width(gA), sB.with_width(gB)
    evals = 0

    nres = 0.0
    states = (("ground", 0), ("excited", 1))
    for stA, iA in states:
        for stB, iB in states:
            dens = pA[iA] * pB[iB]
            if dens == 0:
                continue
            # U_ij(A in stA, B in stB); the pair code takes B in its ground state, so an
            # excited B is handled by letting it play the role of "A"
            if stB == "ground":
                first, second, st = spA, spB, stA
            else:
                if stA == "excited":
                    # both excited: alpha_e(iu) = -alpha_g(iu) for each, same as ground-ground
                    first, second, st = spA, spB, "ground"
                else:
                    first, second, st = spB, spA, "excited"

            def integrand(R, first=first, second=second, st=st):
                R = np.atleast_1d(R)
                vals = np.empty_like(R)
                for k, r in enumerate(R):
                    pc = PairConfig(first, second, float(r), st, None, T)
                    vals[k] = potential_matsubara(pc, QuadratureSpec(abs_tol=1e-300, rel_tol=1e-13)).nonres
                return -2 * math.pi * (R - L) * R * vals

            q = integrate_interval(integrand, L, 4 * L, spec)
            tail = integrate_semiaxis(lambda s: integrand(4 * L + s),
                                      replace(spec, breakpoints=(L,), oscillation_scale=None))
            evals += q.evals + tail.evals
            nres += dens * float((q.value + tail.value).real)

    if mfp == "exact":
        L1, L2 = mean_free_paths_exact(cfg)
    else:
        L1, L2 = mean_free_paths(cfg)
    res = 0.0
    channels = (
        (pA[1] * pB[0], PairConfig(spA, spB, 1.0, "excited", None, T)),
        (pA[0] * pB[1], PairConfig(spB, spA, 1.0, "excited", None, T)),
    )
    for dens, pc in channels:
        if dens == 0:
            continue
        if not (math.isfinite(L1) and math.isfinite(L2)):
            raise DomainError("infinite photon mean free path: resonant force undefined")
        depth_A, depth_B = L2, L1

        def integrand(t, pc=pc):
            t = np.asarray(t, dtype=float)
            return -2 * math.pi * _slab_weight(t, depth_A, depth_B) * (L + t) * resonant_term(pc, L + t)

        pts = sorted({min(depth_A, depth_B), max(depth_A, depth_B)})
        q = integrate_interval(integrand, 0.0, depth_A + depth_B, spec, points=pts)
        evals += q.evals
        res += dens * float(q.value.real)
    return PairwiseForce(res, nres, L1, L2, evals)
