"""Pairwise-summed slab force against the closed-form slab components.

For a dilute pair of half-spaces this prints, over a range of separations,
the pairwise resonant and non-resonant forces next to the closed forms, and
the local power-law slopes (expected -1 and -3).  The pairwise resonant term
is computed with both the printed and the exact photon mean free paths.

    python3 scripts/pairwise_scaling.py
"""
import math

import numpy as np

from gascasimir.slab import (SlabConfig, force_components, mean_free_paths,
                             pairwise_halfspace_force)
from gascasimir.spectra import AtomSpecies, MediumSpec


def slab(L):
    A = AtomSpecies.two_level(1.0, 1.0, broadening_rate=1e-2)
    B = AtomSpecies.two_level(1.3, 1.0, broadening_rate=1e-2)
    return SlabConfig(MediumSpec(A, 1e-3), MediumSpec(B, 1e-3), L, 0.5)


def main():
    lph = max(mean_free_paths(slab(1.0)))
    Ls = lph * np.geomspace(10, 1e4, 7)
    print(f"{'L/L_ph':>8s} {'pw res printed/closed':>22s} {'pw res exact/closed':>20s} {'pw nres/closed':>15s}")
    prev = None
    for L in Ls:
        cfg = slab(L)
        fres, fnres, _ = force_components(cfg)
        p = pairwise_halfspace_force(cfg, mfp="printed")
        pe = pairwise_halfspace_force(cfg, mfp="exact")
        print(f"{L / lph:8.3g} {p.res / fres:22.6f} {pe.res / fres:20.6f} {p.nres / fnres:15.6f}")
        if prev is not None:
            d = math.log(L / prev[0])
            print(f"{'':8s} slopes: res {math.log(p.res / prev[1]) / d:+.4f}, "
                  f"nres {math.log(p.nres / prev[2]) / d:+.4f}")
        prev = (L, p.res, p.nres)


if __name__ == "__main__":
    main()
