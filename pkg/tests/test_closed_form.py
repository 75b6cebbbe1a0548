import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from ivsqrt import closed_form as cf
from ivsqrt.errors import ConventionError, DomainError, SingularMatch
from ivsqrt.field import FieldConfig, c1_normalization, detuning, quasi_energies
from ivsqrt.oracle import residual_eq3

from conftest import FIG1, field_configs, rel

# a2(0) of the first quasi-energy solution, evaluated from the defining
# Hermite formula with mpmath at 30 digits (root sign chosen as documented).
MP_SCATTERING = {
    (1.0, 4.0, -5.0): 0.92991176499965722237346251082 + 0.321490086570316445084511934077j,
    (1.0, 4.0, 4.0): -0.00369163838547514931482958051504 + 0.0279430253362225061508142809748j,
    (2.0, 3.0, 1.5): 0.163422805145066822230211325752 + 0.131892944925576045414671200104j,
}
# mpmath Taylor-series ODE solution for Fig-1 parameters, (a1, a2)(0) = (1, 0).
MP_ODE = {
    1.0: (0.85839143787057905131 - 0.21669843585979391553j,
          0.41800396532316897367 - 0.20366298696745453823j),
    4.0: (-0.043379260303680027316 + 0.58756506009888898846j,
          -0.66265184668397189390 - 0.46236140627523870856j),
}


class TestFundamentalParams:
    def test_fig1_minus_sign_values(self):
        p = cf.fundamental_params(FIG1, S=1)
        assert abs(p.alpha2 - (-0.4721360j)) < 1e-7
        assert abs(p.alpha0 - (-0.5278640j)) < 1e-7

    @given(field_configs(), st.sampled_from([1, -1]), st.sampled_from([1, -1]))
    def test_model_class_invariants(self, cfg, S, sign):
        p = cf.fundamental_params(cfg, S, sign)
        assert p.q == p.alpha0 and p.alpha1 == 0 and p.gamma == -1
        quad = p.alpha2**2 - 2j * cfg.Delta0 * p.alpha2 + 4 * cfg.U0**2
        assert abs(quad) <= 1e-12 * (cfg.Delta0**2 + cfg.U0**2)
        assert abs(p.y_scale - S * cmath.sqrt(-p.epsilon / 2)) == 0
        assert abs(p.y_shift - p.delta / p.epsilon) == 0

    def test_rejects_zero_delta1(self):
        with pytest.raises(DomainError):
            cf.fundamental_params(FieldConfig(1, 4, 0), 1)

    def test_rejects_bad_sign(self):
        with pytest.raises(ValueError):
            cf.fundamental_params(FIG1, 0)


def _residual(vals, t, cfg):
    return residual_eq3(*vals, t, cfg)


class TestRepresentations:
    @settings(max_examples=25)
    @given(field_configs(), st.floats(1e-3, 20.0), st.sampled_from([1, -1]),
           st.sampled_from([1, -1]))
    def test_hermite_form_residual(self, cfg, t, S, sign):
        vals = cf.hermite_solution_derivs(t, cf.fundamental_params(cfg, S, sign))
        assert _residual(vals, t, cfg) <= 1e-8

    @settings(max_examples=25)
    @given(field_configs(), st.floats(1e-3, 20.0), st.sampled_from([0, 1]))
    def test_quasienergy_form_residual(self, cfg, t, which):
        lam = quasi_energies(cfg)[which]
        assert _residual(cf.quasienergy_solution_derivs(t, cfg, lam), t, cfg) <= 1e-8

    @settings(max_examples=15)
    @given(field_configs(), st.floats(0.05, 20.0), st.sampled_from([0, 1]))
    def test_simplified_matches_literal_form(self, cfg, t, which):
        lam = quasi_energies(cfg)[which]
        a = cf.a2_fundamental_quasienergy(t, cfg, lam)
        b = cf.quasienergy_literal(t, cfg, lam)
        assert abs(a - b) <= 1e-10 * max(abs(a), abs(b))

    @settings(max_examples=10)
    @given(field_configs())
    def test_branch_pairing(self, cfg):
        pairing = cf.branch_pairing(cfg)
        assert pairing["lambda1"][:2] == (1, 1)
        assert pairing["lambda2"][:2] == (-1, 1)
        assert pairing["lambda1"][3] <= 1e-8 and pairing["lambda2"][3] <= 1e-8

    def test_lambda_must_be_quasi_energy(self):
        with pytest.raises(DomainError):
            cf.a2_fundamental_quasienergy(1.0, FIG1, 1.234)

    def test_quasienergy_rejects_zero_delta1(self):
        with pytest.raises(DomainError):
            cf.a2_fundamental_quasienergy(1.0, FieldConfig(1, 4, 0), quasi_energies(FIG1)[0])

    def test_small_delta1_approaches_exponential(self):
        cfg = FieldConfig(1.0, 4.0, 1e-7)
        lam1 = quasi_energies(cfg)[0]
        ratios = [cf.a2_fundamental_quasienergy(t, cfg, lam1) / cmath.exp(1j * lam1 * t)
                  for t in np.linspace(0, 10, 11)]
        assert max(abs(r - ratios[0]) for r in ratios) <= 1e-5 * abs(ratios[0])

    def test_value_at_zero_matches_scattering_formula(self):
        for key, ref in MP_SCATTERING.items():
            cfg = FieldConfig(*key)
            c1 = c1_normalization(cfg)
            assert rel(cf.a2_general(0.0, cf.SolutionCoefficients(c1, 0), cfg), ref) < 1e-11

    def test_wronskian(self):
        # W' = i detuning W, so |W| is constant and nonzero
        lam1, lam2, _ = quasi_energies(FIG1)
        mods = []
        for t in np.linspace(0.5, 5, 10):
            f1, d1, _ = cf.quasienergy_solution_derivs(t, FIG1, lam1)
            f2, d2, _ = cf.quasienergy_solution_derivs(t, FIG1, lam2)
            mods.append(abs(f1 * d2 - f2 * d1))
        assert min(mods) > 1e-6
        assert max(mods) - min(mods) <= 1e-10 * max(mods)


class TestGeneralSolution:
    def test_pure_branch(self):
        lam1 = quasi_energies(FIG1)[0]
        for t in (0.0, 0.7, 3.0):
            assert cf.a2_general(t, cf.SolutionCoefficients(1, 0), FIG1) == \
                cf.a2_fundamental_quasienergy(t, FIG1, lam1)

    @given(st.floats(0, 20), st.tuples(*[st.floats(-2, 2)] * 8))
    def test_linearity(self, t, c):
        a = cf.SolutionCoefficients(complex(c[0], c[1]), complex(c[2], c[3]))
        b = cf.SolutionCoefficients(complex(c[4], c[5]), complex(c[6], c[7]))
        lhs = cf.a2_general(t, a + b, FIG1)
        rhs = cf.a2_general(t, a, FIG1) + cf.a2_general(t, b, FIG1)
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))

    def test_zero_delta1_routes_to_rabi(self):
        cfg = FieldConfig(1.0, 4.0, 0.0)
        c = cf.SolutionCoefficients(0.3, 0.2j)
        for t in (0.0, 1.0, 7.5):
            assert abs(cf.a2_general(t, c, cfg) - cf.rabi_solution(t, c, 1.0, 4.0).a2) < 1e-14

    def test_a1_requires_positive_time(self):
        with pytest.raises(DomainError):
            cf.a1_from_a2(0.0, 1.0, FIG1)

    def test_resonant_rabi_a1(self):
        cfg = FieldConfig(1.3, 0.0, 0.0)
        c = cf.solve_ivp_coefficients(cf.AmplitudePair(1, 0), cfg)
        for t in np.linspace(0.1, 10, 25):
            st_ = cf.amplitudes(t, c, cfg)
            assert abs(st_.a1 - math.cos(1.3 * t)) < 1e-12
            assert abs(st_.a2 + 1j * math.sin(1.3 * t)) < 1e-12

    def test_limit_a1_at_zero_is_continuous(self):
        c = cf.SolutionCoefficients(0.4 - 0.1j, 0.2 + 0.3j)
        a1_0 = cf.limit_a1_at_zero(c, FIG1)
        a1_eps = cf.amplitudes(1e-10, c, FIG1).a1
        assert abs(a1_0 - a1_eps) < 1e-8

    def test_modulus_ratio_at_large_t(self):
        # |a1/a2| -> lambda1/U0 with an O(1/sqrt(t)) correction
        lam1 = quasi_energies(FIG1)[0]

        def dev(t):
            st_ = cf.amplitudes(t, cf.SolutionCoefficients(1, 0), FIG1)
            return abs(abs(st_.a1 / st_.a2) / (lam1 / FIG1.U0) - 1)
        assert dev(1e6) < 2e-3
        assert 0.08 < dev(1e6) / dev(1e4) < 0.12


class TestInitialValueMatching:
    def test_round_trip_pure_branch(self):
        c1 = c1_normalization(FIG1)
        pure = cf.amplitudes(0.0, cf.SolutionCoefficients(c1, 0), FIG1)
        c = cf.solve_ivp_coefficients(pure, FIG1)
        assert abs(c.C2) < 1e-12 and abs(c.C1 - c1) < 1e-12

    @pytest.mark.parametrize("ic", [(1, 0), (0, 1), (0.6, 0.8j)])
    def test_reproduces_initial_state(self, ic):
        initial = cf.AmplitudePair(*ic)
        c = cf.solve_ivp_coefficients(initial, FIG1)
        got = cf.amplitudes(0.0, c, FIG1)
        assert abs(got.a1 - initial.a1) < 1e-12 and abs(got.a2 - initial.a2) < 1e-12

    @pytest.mark.parametrize("t", sorted(MP_ODE))
    def test_matches_mpmath_ode_solution(self, t):
        c = cf.solve_ivp_coefficients(cf.AmplitudePair(1, 0), FIG1)
        got = cf.amplitudes(t, c, FIG1)
        a1, a2 = MP_ODE[t]
        assert abs(got.a1 - a1) < 1e-12 and abs(got.a2 - a2) < 1e-12

    def test_conservation(self):
        c = cf.solve_ivp_coefficients(cf.AmplitudePair(1, 0), FIG1)
        for t in np.linspace(0.01, 20, 200):
            assert abs(cf.amplitudes(t, c, FIG1).norm - 1) <= 1e-8

    def test_requires_normalized_input(self):
        with pytest.raises(DomainError):
            cf.solve_ivp_coefficients(cf.AmplitudePair(1, 1), FIG1)

    def test_singular_basis(self):
        with pytest.raises(SingularMatch):
            cf.solve_ivp_coefficients(cf.AmplitudePair(1, 0), FieldConfig(1e-14, 0.0, 0.0))


class TestScattering:
    @pytest.mark.parametrize("key", list(MP_SCATTERING))
    def test_against_reference(self, key):
        got = cf.scattering_a2_at_zero(FieldConfig(*key))
        assert rel(got.a2, MP_SCATTERING[key]) < 1e-11
        assert abs(got.p1 + got.p2 - 1) < 1e-15

    def test_never_zero(self):
        for u in np.geomspace(0.1, 100, 50):
            assert cf.scattering_a2_at_zero(FieldConfig(u, 4, -5)).p2 > 0

    def test_noncrossing_corner_starts_in_first_level(self):
        assert cf.scattering_a2_at_zero(FieldConfig(1, 4, 4)).p1 >= 0.8

    def test_literal_root_agrees_only_for_crossing_sign(self):
        a = cf.scattering_a2_at_zero(FIG1)
        b = cf.scattering_a2_at_zero(FIG1, root_branch="principal")
        assert a == b
        cfg = FieldConfig(1, 4, 4)
        assert abs(cf.scattering_a2_at_zero(cfg).a2
                   - cf.scattering_a2_at_zero(cfg, root_branch="principal").a2) > 0.1

    @pytest.mark.parametrize("key", list(MP_SCATTERING))
    def test_back_propagation(self, key):
        cfg = FieldConfig(*key)
        c = cf.SolutionCoefficients(c1_normalization(cfg), 0)
        T = 400.0
        end = cf.amplitudes(T, c, cfg)
        u0, d0, d1 = cfg.U0, cfg.Delta0, cfg.Delta1

        def rhs(s, y):
            e = np.exp(1j * (d0 * s * s + 2 * d1 * s))
            return [-2j * s * u0 * y[1] / e, -2j * s * u0 * y[0] * e]
        sol = solve_ivp(rhs, (math.sqrt(T), 0.0), [end.a1, end.a2], method="DOP853",
                        rtol=1e-12, atol=1e-14)
        assert abs(sol.y[1, -1] - cf.scattering_a2_at_zero(cfg).a2) <= 1e-4

    def test_convention(self):
        with pytest.raises(ConventionError):
            cf.scattering_a2_at_zero(FieldConfig(1, -4, 5))
        with pytest.raises(ConventionError):
            cf.approx_weak_field(FieldConfig(1, 0, 5))


def _p2(u, d1=-5.0):
    return cf.scattering_a2_at_zero(FieldConfig(u, 4.0, d1)).p2


class TestApproximations:
    def test_weak_field_accuracy(self):
        assert abs(abs(cf.approx_weak_field(FieldConfig(0.02, 4, -5))) ** 2 - _p2(0.02)) <= 1e-3

    def test_weak_field_monotone(self):
        errs = [abs(abs(cf.approx_weak_field(FieldConfig(u, 4, -5))) ** 2 - _p2(u))
                for u in (0.2, 0.1, 0.05, 0.02)]
        assert all(np.diff(errs) < 0)

    def test_weak_field_literal_root_degenerates_for_positive_delta1(self):
        cfg = FieldConfig(0.05, 4, 5)
        assert cf.approx_weak_field(cfg, root_branch="principal") == c1_normalization(cfg)

    def test_weak_field_sign_consistent_root_tracks_exact(self):
        cfg = FieldConfig(0.05, 4, 5)
        exact = cf.scattering_a2_at_zero(cfg).a2
        assert abs(cf.approx_weak_field(cfg) - exact) < 1e-3

    def test_strong_field_accuracy(self):
        assert abs(abs(cf.approx_strong_field(FieldConfig(100, 4, -5))) ** 2 - _p2(100)) <= 1e-2

    def test_strong_field_monotone(self):
        errs = [abs(abs(cf.approx_strong_field(FieldConfig(u, 4, -5))) ** 2 - _p2(u))
                for u in (20.0, 50.0, 100.0, 200.0)]
        assert all(np.diff(errs) < 0)

    def test_strong_field_zero_order_limit(self):
        cfg = FieldConfig(3.0, 4.0, 0.0)
        assert abs(cf.approx_strong_field(cfg) - c1_normalization(cfg)) < 1e-14


class TestRabi:
    def test_full_transfer(self):
        u = 0.8
        c = cf.solve_ivp_coefficients(cf.AmplitudePair(1, 0), FieldConfig(u, 0.0, 0.0))
        st_ = cf.rabi_solution(math.pi / (2 * u), c, u, 0.0)
        assert abs(abs(st_.a2) - 1) < 1e-14

    @given(st.floats(0.1, 5), st.floats(-5, 5), st.floats(0, 50), st.floats(0, 2 * math.pi))
    def test_unitary(self, u, d0, t, theta):
        cfg = FieldConfig(u, d0, 0.0)
        ic = cf.AmplitudePair(math.cos(theta), 1j * math.sin(theta))
        c = cf.solve_ivp_coefficients(ic, cfg)
        assert abs(cf.rabi_solution(t, c, u, d0).norm - 1) < 1e-12

    def test_residual_is_tiny(self):
        cfg = FieldConfig(1.0, 4.0, 0.0)
        lam1, lam2, _ = quasi_energies(cfg)
        c = cf.SolutionCoefficients(0.3, -0.5j)
        for t in (0.5, 3.0, 11.0):
            vals = cf.general_derivs(t, c, cfg)
            assert residual_eq3(*vals, t, cfg) <= 1e-12


class TestAsymptotes:
    def test_lambda1_modulus_at_1e4_matches_prefactor(self):
        # stated claim: within 1%; the O(1/sqrt(t)) correction is about 1.07% here
        lam1 = quasi_energies(FIG1)[0]
        mod = abs(cf.a2_fundamental_quasienergy(1e4, FIG1, lam1))
        assert abs(mod / cf.asymptote_prefactor(FIG1, 1) - 1) <= 0.01

    def test_lambda1_modulus_tends_to_prefactor(self):
        lam1 = quasi_energies(FIG1)[0]
        mod = abs(cf.a2_fundamental_quasienergy(1e8, FIG1, lam1))
        assert abs(mod / cf.asymptote_prefactor(FIG1, 1) - 1) <= 2e-4

    def test_lambda2_prefactor_is_single_pi(self):
        lam2 = quasi_energies(FIG1)[1]
        mod = abs(cf.a2_fundamental_quasienergy(1e4, FIG1, lam2))
        assert abs(mod / cf.asymptote_prefactor(FIG1, 2) - 1) <= 0.01
        assert abs(mod / cf.asymptote_prefactor(FIG1, 2, multiplier=4.0) - 1) > 0.5

    def test_phase_is_stripped(self):
        # the stripped value varies slowly: its phase drifts by less than 0.05 rad per decade
        vals = [cf.stripped_asymptote(t, FIG1, b) for b in (1, 2) for t in (1e3, 1e4)]
        assert abs(cmath.phase(vals[1] / vals[0])) < 0.05
        assert abs(cmath.phase(vals[3] / vals[2])) < 0.05

    def test_bad_branch(self):
        with pytest.raises(ValueError):
            cf.asymptote_phase(1.0, FIG1, 3)
