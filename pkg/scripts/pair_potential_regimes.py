"""Excited-ground pair potential in vacuum across the near and far zones.

Evaluates the real-axis potential (coth-weighted, zero temperature) and
compares it to the short-range law including the fluctuation term and to
the retarded R^-2 law.

    python3 scripts/pair_potential_regimes.py
"""
import numpy as np

from gascasimir.pairpot import (PairConfig, eq28_retarded_vacuum, nonretarded_vacuum_full,
                                potential_finite_T)
from gascasimir.quad import QuadratureSpec
from gascasimir.spectra import AtomSpecies


def main():
    wA, wB = 1.0, 1.5
    A = AtomSpecies.two_level(wA, 1.0)
    B = AtomSpecies.two_level(wB, 1.0)
    tol = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-9)
    print(f"{'R':>10s} {'U':>16s} {'U/U_short':>12s} {'U/U_far':>12s}")
    for R in np.geomspace(1e-3, 1e3, 13):
        r = potential_finite_T(PairConfig(A, B, R), tol)
        short = nonretarded_vacuum_full(1.0, 1.0, wA, wB, R)
        far = eq28_retarded_vacuum(1.0, 1.0, wA, wB, R)
        print(f"{R:10.3g} {r.total:16.8e} {r.total / short:12.6f} {r.total / far:12.6f}")


if __name__ == "__main__":
    main()
