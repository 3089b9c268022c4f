"""Casimir-Polder interactions of excited and ground-state atoms in dilute absorbing gases.

Natural units (hbar = c = k_B = 1).  Modules:

* :mod:`.spectra`  polarizabilities, permittivity, populations, widths
* :mod:`.greens`   photon Green tensor and its radial kernels
* :mod:`.pairpot`  two-atom potentials (real axis, imaginary axis, Matsubara)
* :mod:`.slab`     forces between two gas half-spaces
* :mod:`.quad`     quadrature and Matsubara summation engine
* :mod:`.cli`      configuration-driven command line
"""

__version__ = "0.1.0"

from .errors import BranchError, ConvergenceError, DomainError
from .spectra import AtomSpecies, MediumSpec, Transition
from .pairpot import PairConfig, PairPotentialResult
from .slab import SlabConfig, SlabForceResult
from .quad import QuadratureSpec

__all__ = [
    "__version__",
    "AtomSpecies",
    "BranchError",
    "ConvergenceError",
    "DomainError",
    "MediumSpec",
    "PairConfig",
    "PairPotentialResult",
    "QuadratureSpec",
    "SlabConfig",
    "SlabForceResult",
    "Transition",
]
