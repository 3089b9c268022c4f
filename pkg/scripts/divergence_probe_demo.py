"""Energy of an excited atom near a half-space of ground-state gas, summed
pairwise inside a sphere of growing radius R_cut.

Without absorption the sum grows linearly with R_cut; with the medium's
absorption it saturates once R_cut exceeds the photon mean free path.

    python3 scripts/divergence_probe_demo.py
"""
import math

import numpy as np

from gascasimir.pairpot import divergence_probe
from gascasimir.spectra import AtomSpecies, MediumSpec, refractive_index


def main():
    A = AtomSpecies.two_level(1.0, 1.0)
    medium = MediumSpec(AtomSpecies.two_level(1.3, 1.0, 1e-3), 1e-3)
    lph = 1 / (2 * complex(refractive_index(medium, 1.0)).imag)
    print(f"photon mean free path at w_A: {lph:.4g}")
    cutoffs = list(np.geomspace(0.1 * lph, 50 * lph, 10))
    pert = divergence_probe(A, medium, 1.0, cutoffs, perturbative=True)
    absorb = divergence_probe(A, medium, 1.0, cutoffs, perturbative=False)
    print(f"{'R_cut/L_ph':>12s} {'U perturbative':>18s} {'U absorbing':>18s}")
    for (rc, up), (_, ua) in zip(pert, absorb):
        print(f"{rc / lph:12.4g} {up:18.8e} {ua:18.8e}")
    growth = math.log(pert[-1][1] / pert[0][1]) / math.log(cutoffs[-1] / cutoffs[0])
    print(f"perturbative growth exponent: {growth:.4f}")


if __name__ == "__main__":
    main()
