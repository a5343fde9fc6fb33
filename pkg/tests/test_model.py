"""Model-layer checks: types, rates, right-hand sides, observables."""

import math

import numpy as np
import pytest

from polsim.model import (
    FieldState,
    ModelParams,
    ReservoirParams,
    ReservoirSite,
    ReservoirState,
    SingularStateError,
    ZPhiState,
    gain_loss_coefficient,
    observables,
    pump_rate_for_gain,
    reduced_rhs,
    rhs_full,
    rhs_reduced,
    rhs_zphi,
    steady_reservoir_population,
    wrap_phase,
)


class TestTypes:
    def test_field_state_roundtrip(self):
        st = FieldState(1 + 2j, 0.5, -1j, 0)
        assert np.allclose(FieldState.from_array(st.to_array()).to_array(), st.to_array())

    def test_field_state_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            FieldState(psi_L_plus=float("nan"))

    def test_populations_nonnegative(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            st = FieldState.from_array(rng.normal(size=4) + 1j * rng.normal(size=4))
            assert np.all(st.populations() >= 0)

    def test_model_params_requires_positive_J(self):
        with pytest.raises(ValueError):
            ModelParams(J=0.0)
        with pytest.raises(ValueError):
            ModelParams(J=-1.0)

    def test_zphi_state_bounds(self):
        ZPhiState(1.0, -1.0, 0.1, 0.2)  # boundary allowed for the type
        with pytest.raises(ValueError):
            ZPhiState(z_plus=1.0001)

    def test_reservoir_site_validation(self):
        with pytest.raises(ValueError):
            ReservoirSite(P=1.0, Gamma=0.0, q=1.0, kappa=1.0)
        with pytest.raises(ValueError):
            ReservoirSite(P=-1.0, Gamma=1.0, q=1.0, kappa=1.0)

    def test_reservoir_state_nonnegative(self):
        with pytest.raises(ValueError):
            ReservoirState(n_L_plus=-0.1)


class TestPTCondition:
    def test_pt_balanced_constructor(self):
        mp = ModelParams.pt_balanced(u_s=1.0, u_c=0.5, gamma=0.3)
        assert mp.pt_symmetric
        assert mp.single_gamma() == 0.3

    def test_asymmetric_gamma_not_pt(self):
        mp = ModelParams(gamma_L_plus=0.1, gamma_R_plus=-0.2)
        assert not mp.pt_symmetric

    def test_eps_mismatch_not_pt(self):
        mp = ModelParams(eps_L_plus=0.5, eps_R_plus=0.0)
        assert not mp.pt_symmetric

    def test_pt_from_tuned_pumps(self):
        # pumps tuned so the left gains what the right loses
        left = ReservoirSite(P=pump_rate_for_gain(0.2, Gamma=50.0, q=1.0, kappa=0.9),
                             Gamma=50.0, q=1.0, kappa=0.9)
        right = ReservoirSite(P=pump_rate_for_gain(-0.2, Gamma=50.0, q=1.0, kappa=0.9),
                              Gamma=50.0, q=1.0, kappa=0.9)
        g_L = gain_loss_coefficient(left)
        g_R = gain_loss_coefficient(right)
        mp = ModelParams(gamma_L_plus=g_L, gamma_L_minus=g_L,
                         gamma_R_plus=g_R, gamma_R_minus=g_R)
        assert mp.pt_symmetric
        # detune one pump and the report flips
        right2 = ReservoirSite(P=right.P * 1.01, Gamma=50.0, q=1.0, kappa=0.9)
        g_R2 = gain_loss_coefficient(right2)
        mp2 = ModelParams(gamma_L_plus=g_L, gamma_L_minus=g_L,
                          gamma_R_plus=g_R2, gamma_R_minus=g_R2)
        assert not mp2.pt_symmetric


class TestGainLoss:
    def test_no_pump_no_loss(self):
        assert gain_loss_coefficient(ReservoirSite(P=0, Gamma=1, q=0, kappa=0)) == 0.0

    def test_direct_arithmetic(self):
        assert gain_loss_coefficient(ReservoirSite(P=2, Gamma=1, q=1, kappa=1)) == 0.5

    def test_exact_balance(self):
        assert gain_loss_coefficient(ReservoirSite(P=1, Gamma=1, q=1, kappa=1)) == 0.0

    def test_pump_rate_roundtrip(self):
        for gamma in (0.0, 0.1, -0.2):
            P = pump_rate_for_gain(gamma, Gamma=100.0, q=0.1, kappa=0.5)
            site = ReservoirSite(P=P, Gamma=100.0, q=0.1, kappa=0.5)
            assert gain_loss_coefficient(site) == pytest.approx(gamma, abs=1e-14)

    def test_pump_rate_rejects_unreachable_loss(self):
        with pytest.raises(ValueError):
            pump_rate_for_gain(-1.0, Gamma=1.0, q=1.0, kappa=0.5)


class TestSteadyReservoir:
    def test_undepleted_limit(self):
        site = ReservoirSite(P=1, Gamma=1, q=0, kappa=0)
        assert steady_reservoir_population(site, 123.0) == 1.0

    def test_direct_arithmetic(self):
        site = ReservoirSite(P=2, Gamma=1, q=1, kappa=0)
        assert steady_reservoir_population(site, 1.0) == 1.0

    def test_weak_depletion_limit(self):
        site = ReservoirSite(P=1, Gamma=100, q=1, kappa=0)
        n = steady_reservoir_population(site, 1.0)
        assert n == pytest.approx(1.0 / 101.0, rel=1e-12)  # close to P/Gamma
        assert abs(n - site.P / site.Gamma) < 1e-4


class TestReducedRHS:
    def test_zero_state_zero_derivative(self):
        d = rhs_reduced(FieldState(), ModelParams(u_s=1.0, u_c=0.5))
        assert np.all(d.to_array() == 0)

    def test_bare_tunneling(self):
        d = rhs_reduced(FieldState(psi_L_plus=1.0), ModelParams())
        assert d.psi_R_plus == pytest.approx(1j)
        assert d.psi_L_plus == pytest.approx(0.0)

    def test_self_interaction_and_gain(self):
        mp = ModelParams(u_s=1.0, gamma_L_plus=0.1)
        d = rhs_reduced(FieldState(psi_L_plus=1.0), mp)
        assert d.psi_L_plus == pytest.approx(-1j + 0.1)

    def test_arbitrary_gamma_per_site(self):
        mp = ModelParams(gamma_L_plus=0.1, gamma_R_plus=-0.2)
        d = rhs_reduced(FieldState(psi_L_plus=1.0, psi_R_plus=1.0), mp)
        assert d.psi_L_plus == pytest.approx(0.1 + 1j)
        assert d.psi_R_plus == pytest.approx(-0.2 + 1j)

    def test_species_swap_equivariance(self):
        # swapping (+) <-> (-) in both params and state maps the flow onto itself
        rng = np.random.default_rng(3)
        mp = ModelParams(u_s=0.8, u_c=1.3,
                         gamma_L_plus=0.05, gamma_L_minus=-0.02,
                         gamma_R_plus=-0.1, gamma_R_minus=0.04)
        mp_swapped = ModelParams(u_s=0.8, u_c=1.3,
                                 gamma_L_plus=-0.02, gamma_L_minus=0.05,
                                 gamma_R_plus=0.04, gamma_R_minus=-0.1)
        swap = [1, 0, 3, 2]
        for _ in range(20):
            y = rng.normal(size=4) + 1j * rng.normal(size=4)
            d1 = reduced_rhs(mp)(0.0, y)
            d2 = reduced_rhs(mp_swapped)(0.0, y[swap])
            assert np.allclose(d1[swap], d2, atol=1e-14)


class TestFullRHS:
    def _rp(self, P=0.0, Gamma=1.0, q=0.0, kappa=0.0):
        site = ReservoirSite(P=P, Gamma=Gamma, q=q, kappa=kappa)
        return ReservoirParams(site, site, site, site)

    def test_all_zero(self):
        d_f, d_n = rhs_full(FieldState(), ReservoirState(), ModelParams(), self._rp())
        assert np.all(d_f.to_array() == 0)
        assert np.all(d_n.to_array() == 0)

    def test_pump_only(self):
        d_f, d_n = rhs_full(FieldState(), ReservoirState(), ModelParams(),
                            self._rp(P=1.0, Gamma=1.0))
        assert np.all(d_f.to_array() == 0)
        assert np.allclose(d_n.to_array(), 1.0)

    def test_interaction_and_tunneling(self):
        d_f, _ = rhs_full(FieldState(psi_L_plus=1.0), ReservoirState(),
                          ModelParams(u_s=1.0), self._rp())
        assert d_f.psi_L_plus == pytest.approx(-1j)
        assert d_f.psi_R_plus == pytest.approx(1j)

    def test_reservoir_depletion(self):
        # dn = P - Gamma n - q n N
        d_f, d_n = rhs_full(FieldState(psi_L_plus=2.0),
                            ReservoirState(n_L_plus=3.0),
                            ModelParams(),
                            self._rp(P=1.0, Gamma=2.0, q=0.5))
        assert d_n.n_L_plus == pytest.approx(1.0 - 2.0 * 3.0 - 0.5 * 3.0 * 4.0)
        # condensate gain (q n - kappa)/2 = 0.75
        assert d_f.psi_L_plus == pytest.approx(2.0 * 0.75)


class TestZPhiRHS:
    def test_fixed_point_zero_derivative(self):
        for gamma, u_s, u_c in [(0.0, 0.0, 0.0), (0.3, 1.0, 0.7), (0.5, 2.0, 0.1)]:
            mp = ModelParams.pt_balanced(u_s=u_s, u_c=u_c, gamma=gamma)
            st = ZPhiState(0.0, 0.0, math.asin(gamma), math.asin(gamma))
            d = rhs_zphi(st, mp)
            assert np.allclose(d.to_array(), 0.0, atol=1e-15)

    def test_hermitian_origin_fixed(self):
        d = rhs_zphi(ZPhiState(), ModelParams.pt_balanced(u_s=1.0, u_c=0.5))
        assert np.allclose(d.to_array(), 0.0)

    def test_hand_evaluated_derivative(self):
        mp = ModelParams.pt_balanced(u_s=1.0, u_c=0.5, gamma=0.0)
        d = rhs_zphi(ZPhiState(z_plus=0.5), mp)
        assert d.z_plus == pytest.approx(0.0, abs=1e-15)
        # u_s z + 2 z cos(0) / sqrt(1 - z^2) = 0.5 + 1/sqrt(0.75)
        assert d.Phi_plus == pytest.approx(1.6547005383792515, abs=1e-12)
        assert d.Phi_minus == pytest.approx(0.25)  # u_c * z_plus

    def test_singular_at_unit_imbalance(self):
        mp = ModelParams.pt_balanced(gamma=0.1)
        f = __import__("polsim.model", fromlist=["zphi_rhs"]).zphi_rhs(mp)
        with pytest.raises(SingularStateError):
            f(0.0, np.array([1.0, 0.0, 0.0, 0.0]))

    def test_requires_balanced_params(self):
        mp = ModelParams(gamma_L_plus=0.1, gamma_R_plus=-0.2)
        with pytest.raises(ValueError):
            rhs_zphi(ZPhiState(), mp)


class TestObservables:
    def test_all_left(self):
        obs = observables(FieldState(psi_L_plus=1.0))
        assert obs.z_plus == 1.0
        assert math.isnan(obs.z_minus)  # empty species flagged, not raised

    def test_balanced_split(self):
        a = 2 ** -0.5
        obs = observables(FieldState(psi_L_plus=a, psi_R_plus=a))
        assert obs.z_plus == pytest.approx(0.0)
        assert obs.Phi_plus == pytest.approx(0.0)

    def test_phase_readout(self):
        obs = observables(FieldState(psi_L_plus=1.0, psi_R_plus=1j))
        assert obs.z_plus == pytest.approx(0.0)
        assert obs.Phi_plus == pytest.approx(math.pi / 2)

    def test_wrap_convention(self):
        # (-pi, pi] with the boundary mapped to +pi
        assert wrap_phase(math.pi) == pytest.approx(math.pi)
        assert wrap_phase(-math.pi) == pytest.approx(math.pi)
        assert wrap_phase(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
        assert wrap_phase(0.25) == pytest.approx(0.25)
