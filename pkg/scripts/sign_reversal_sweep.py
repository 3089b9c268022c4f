"""Sweep the gas density through the high-temperature balance point.

Prints F_total / F_Lif for two half-spaces of the same density at T = 10 max(w_A, w_B)
and the analytic balance density n* where the resonant correction cancels the
Lifshitz attraction.

    python3 scripts/sign_reversal_sweep.py [--points 13] [--out DIR]
"""
import argparse

import numpy as np

from gascasimir.report import emit_report
from gascasimir.slab import SlabConfig, force_total, highT_balance_density
from gascasimir.spectra import AtomSpecies, MediumSpec


def slab(n0, wA=1.0, wB=1.3, L=1e3):
    A = AtomSpecies.two_level(wA, 1.0, broadening_rate=1.0)
    B = AtomSpecies.two_level(wB, 1.0, broadening_rate=1.0)
    return SlabConfig(MediumSpec(A, n0), MediumSpec(B, n0), L, 10 * max(wA, wB))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--out")
    args = ap.parse_args()

    n_star = highT_balance_density(slab(1.0))
    print(f"analytic balance density n* = {n_star:.6e}")
    rows = []
    for f in np.logspace(-2, 2, args.points):
        r = force_total(slab(n_star * f), "highT_Eq48")
        rows.append([n_star * f, f, r.total, r.lifshitz, r.total / r.lifshitz])
        sign = "attractive" if r.total > 0 else "repulsive" if r.total < 0 else "balanced"
        print(f"n0/n* = {f:9.3g}   F/F_Lif = {r.total / r.lifshitz:+.6f}   ({sign})")
    if args.out:
        header = ["density", "density_over_balance", "F_total", "F_Lif", "ratio"]
        emit_report(args.out, "sign_reversal_sweep", header, rows,
                    {"balance_density": n_star, "force_mode": "highT_Eq48", "columns": header})


if __name__ == "__main__":
    main()
