import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gascasimir.errors import DomainError
from gascasimir.pairpot import (
    PairConfig,
    asymptotic_potential,
    divergence_probe,
    eq27_nonretarded_vacuum,
    eq28_retarded_vacuum,
    eq30_nonretarded_medium,
    eq31_retarded_medium,
    nonretarded_vacuum_full,
    potential_finite_T,
    potential_matsubara,
    potential_T0,
    potential_T0_ground_ground,
    resonant_term,
)
from gascasimir.quad import QuadratureSpec
from gascasimir.spectra import AtomSpecies, MediumSpec, Transition, polarizability_ground, refractive_index

TIGHT = QuadratureSpec(abs_tol=1e-300, rel_tol=1e-10)


def atom(w, d2=1.0, rel_width=1e-6):
    return AtomSpecies.two_level(w, d2, rel_width * w)


A, B = atom(1.0), atom(2.0)
A0, B0 = AtomSpecies.two_level(1.0, 1.0), AtomSpecies.two_level(2.0, 1.0)


class TestConfig:
    def test_separation_must_be_positive(self):
        with pytest.raises(DomainError):
            PairConfig(A, B, 0.0)
        with pytest.raises(DomainError):
            PairConfig(A, B, -1.0)

    def test_state_checked(self):
        with pytest.raises(DomainError):
            PairConfig(A, B, 1.0, "rydberg")

    def test_route_preconditions(self):
        with pytest.raises(DomainError):
            potential_T0(PairConfig(A, B, 1.0, "excited", None, 0.1))
        with pytest.raises(DomainError):
            potential_matsubara(PairConfig(A, B, 1.0, "excited"))
        with pytest.raises(DomainError):
            potential_T0_ground_ground(PairConfig(A, B, 1.0, "excited"))


class TestZeroTemperature:
    def test_short_range_full_nonretarded_form(self):
        # off resonance the fluctuation part matters; the complete short-range law is
        # -(2/3)|dA|^2|dB|^2 / ((wB - wA) R^6)
        R = 1e-3
        U = potential_T0(PairConfig(A, B, R, "excited"), TIGHT).total
        assert U == pytest.approx(nonretarded_vacuum_full(1, 1, 1, 2, R), rel=1e-5)
        # the real-photon part alone is the printed short-range law
        assert U / eq27_nonretarded_vacuum(1, 1, 1, 2, R) == pytest.approx((1 + 2) / (2 * 2), rel=1e-5)

    def test_long_range_law_off_resonance(self):
        R = 1e2 * 2 * math.pi / 2.0
        U = potential_T0(PairConfig(A, B, R, "excited"), TIGHT).total
        assert U == pytest.approx(eq28_retarded_vacuum(1, 1, 1, 2, R), rel=1e-3)

    def test_zero_dipole_gives_zero(self):
        r = potential_T0(PairConfig(atom(1.0, 0.0), B, 0.7, "excited"), TIGHT)
        assert r.total == 0 and r.res == 0 and r.nonres == 0

    def test_components_add_up_and_ground_has_no_resonance(self):
        for state in ("excited", "ground"):
            r = potential_T0(PairConfig(A, B, 0.7, state), TIGHT)
            assert r.total == r.nonres + r.res
            if state == "ground":
                assert r.res == 0.0

    def test_width_floor_recorded(self):
        r = potential_T0(PairConfig(A0, B0, 1.0, "excited"), TIGHT)
        assert r.width_floor == 1e-6
        assert potential_T0(PairConfig(A, B, 1.0, "excited"), TIGHT).width_floor is None

    @pytest.mark.parametrize("R", [0.3, 3.0])
    def test_real_and_imaginary_axis_agree(self, R):
        c = PairConfig(A, B, R, "ground")
        assert potential_T0(c, TIGHT).total == pytest.approx(potential_T0_ground_ground(c, TIGHT).total,
                                                             rel=1e-6)

    def test_nonretarded_medium_limit(self):
        med = MediumSpec(AtomSpecies.two_level(3.0, 1.0), 0.05)
        for R in (1e-3, 1e-4):
            U = potential_T0_ground_ground(PairConfig(A0, B0, R, "ground", med), TIGHT).total
            ref = eq30_nonretarded_medium(lambda u: polarizability_ground(A0, 1j * u),
                                          lambda u: polarizability_ground(B0, 1j * u),
                                          lambda u: refractive_index(med, 1j * u), R, TIGHT,
                                          breakpoints=(1.0, 2.0, 3.0))
            assert U == pytest.approx(ref, rel=10 * R)

    def test_monotone_decay_ground_ground_vacuum(self):
        Rs = np.geomspace(0.05, 500, 25)
        U = [abs(potential_T0_ground_ground(PairConfig(A0, B0, R, "ground"), TIGHT).total) for R in Rs]
        assert all(u2 < u1 for u1, u2 in zip(U, U[1:]))

    def test_resonant_term_R2_constant_in_transparent_medium(self):
        med = MediumSpec(AtomSpecies.two_level(3.0, 1.0), 0.05)
        cfg = PairConfig(A0, B0, 1.0, "excited", med)
        vals = resonant_term(cfg, np.array([1e4, 1e5, 1e6])) * np.array([1e4, 1e5, 1e6]) ** 2
        assert vals[2] == pytest.approx(vals[1], rel=1e-8)
        assert vals[1] == pytest.approx(vals[0], rel=1e-6)


class TestFiniteTemperature:
    def test_zero_temperature_limit(self):
        u0 = potential_T0(PairConfig(A, B, 1.0, "excited"), TIGHT).total
        uT = potential_finite_T(PairConfig(A, B, 1.0, "excited", None, 1e-3), TIGHT).total
        assert uT == pytest.approx(u0, rel=1e-8)

    def test_single_transition_multilevel_equals_two_level(self):
        multi = AtomSpecies((Transition(1.0, 1.0, 1e-6),))
        c1 = PairConfig(A, B, 1.0, "excited", None, 0.3)
        c2 = PairConfig(multi, B, 1.0, "excited", None, 0.3)
        assert potential_finite_T(c1, TIGHT) == potential_finite_T(c2, TIGHT)

    def test_multilevel_resonant_sum(self):
        sp = AtomSpecies(((1.0, 1.0, 1e-6), (1.7, 0.5, 1e-6)))
        cfg = PairConfig(sp, B, 3.0, "excited", None, 0.2)
        parts = sum(resonant_term(PairConfig(AtomSpecies((t,)), B, 3.0, "excited", None, 0.2))
                    for t in sp.transitions)
        assert resonant_term(cfg) == pytest.approx(parts, rel=1e-14)

    @settings(max_examples=6)
    @given(st.floats(0.05, 3.0), st.floats(0.5, 3.0), st.floats(0.3, 3.0))
    def test_matsubara_equals_real_axis(self, T, wB, R):
        a, b = atom(1.0), atom(wB)
        c = PairConfig(a, b, R, "ground", None, T)
        assert potential_matsubara(c, TIGHT).total == pytest.approx(potential_finite_T(c, TIGHT).total,
                                                                    rel=1e-6)

    def test_matsubara_tends_to_zero_temperature_integral(self):
        g0 = potential_T0_ground_ground(PairConfig(A0, B0, 1.0, "ground"), TIGHT).total
        m = potential_matsubara(PairConfig(A0, B0, 1.0, "ground", None, 1e-3), TIGHT)
        assert m.total == pytest.approx(g0, rel=1e-3)
        assert m.extra["n_terms"] > 1000

    def test_high_temperature_static_term_dominates(self):
        T, R = 1.0, 2.0
        m = potential_matsubara(PairConfig(A0, B0, R, "ground", None, T), TIGHT).total
        a0A, a0B = 2 / 3, 2 / 6
        assert m == pytest.approx(-3 * T * a0A * a0B / R**6, rel=1e-2)

    def test_zero_term_has_half_weight(self):
        # at very high T only the static term survives; its weight 1/2 fixes the prefactor 3T
        T, R = 50.0, 1.0
        m = potential_matsubara(PairConfig(A0, B0, R, "ground", None, T), TIGHT)
        assert m.total == pytest.approx(-2 * T * 0.5 * (2 / 3) * (1 / 3) * 3 / R**6, rel=1e-12)

    def test_excited_ground_gg_drops_resonant_term(self):
        m = potential_matsubara(PairConfig(A, B, 1.0, "ground", None, 0.5), TIGHT)
        assert m.res == 0.0


class TestClosedForms:
    def test_retarded_example_value(self):
        assert eq28_retarded_vacuum(1, 1, 1, 2, 1) == pytest.approx(-8 / 27, rel=1e-15)
        assert asymptotic_potential("retarded_vacuum_exc", dA2=1, dB2=1, wA=1, wB=2, R=1) == \
            eq28_retarded_vacuum(1, 1, 1, 2, 1)

    def test_short_range_sign_flip(self):
        assert eq27_nonretarded_vacuum(1, 1, 1, 2, 1) < 0
        assert eq27_nonretarded_vacuum(1, 1, 2, 1, 1) > 0

    def test_pole_rejected(self):
        for fn in (eq27_nonretarded_vacuum, eq28_retarded_vacuum, nonretarded_vacuum_full):
            with pytest.raises(DomainError):
                fn(1, 1, 1.0, 1.0, 1.0)

    def test_vacuum_reduction_of_medium_tail(self):
        assert eq31_retarded_medium(0.5, 0.25, 1.0, 2.0) == pytest.approx(-23 * 0.125 / (4 * math.pi * 128))

    def test_unknown_regime(self):
        with pytest.raises(DomainError):
            asymptotic_potential("casimir_torque")

    def test_medium_tail_against_numerics(self):
        n0 = 1.2
        sp = AtomSpecies.two_level(2.0, 1.0)
        med = MediumSpec(sp, (n0**2 - 1) / (4 * math.pi * (1 / 3)))
        R = 100 * 2 * math.pi
        U = potential_T0_ground_ground(PairConfig(A0, B0, R, "ground", med), TIGHT).total
        assert U == pytest.approx(asymptotic_potential("retarded_medium_gg", alpha_A0=2 / 3, alpha_B0=1 / 3,
                                                       n0=n0, R=R), rel=5e-3)


class TestDivergenceProbe:
    medium = MediumSpec(AtomSpecies.two_level(1.3, 1.0, 1e-3), 1e-3)

    def test_perturbative_grows_linearly(self):
        rows = divergence_probe(A0, self.medium, 1.0, (1e4, 2e4, 4e4), perturbative=True)
        u = [r[1] for r in rows]
        assert u[1] / u[0] == pytest.approx(2.0, abs=0.02)
        assert u[2] / u[1] == pytest.approx(2.0, abs=0.01)

    def test_absorbing_kernel_converges(self):
        lph = 1 / (2 * complex(refractive_index(self.medium, 1.0)).imag)
        rows = divergence_probe(A0, self.medium, 1.0, (10 * lph, 20 * lph, 40 * lph))
        u = [r[1] for r in rows]
        assert abs(u[1] / u[0] - 1) < 1e-3
        assert abs(u[2] / u[1] - 1) < 1e-8

    def test_transparent_medium_diverges_again(self):
        med = MediumSpec(AtomSpecies.two_level(1.3, 1.0), 1e-3)
        rows = divergence_probe(A0, med, 1.0, (1e4, 2e4))
        assert rows[1][1] / rows[0][1] == pytest.approx(2.0, abs=0.02)

    def test_cutoff_inside_probe_distance(self):
        assert divergence_probe(A0, self.medium, 5.0, (1.0,))[0] == (1.0, 0.0)
