import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coldamp.model import (BareParams, SystemParams, ThermalEnvironment,
                           normalize, occupation_from_temperature,
                           steady_state_means, temperature_from_occupation)

OMEGA_M = 2 * np.pi * 1e7


def bare_set(mu=0.0, omega_tilde_2=None, drive=OMEGA_M, lam=(0.0, 0.0)):
    return BareParams(
        omega_c=100 * OMEGA_M, omega_L=100 * OMEGA_M, drive=drive,
        kappa=4 * OMEGA_M,
        omega_tilde_1=OMEGA_M, omega_tilde_2=omega_tilde_2 or OMEGA_M,
        mass_1=1.0, mass_2=1.0, lam_1=lam[0], lam_2=lam[1],
        gamma_1=1e-6 * OMEGA_M, gamma_2=1e-6 * OMEGA_M, mu=mu)


class TestNormalize:
    def test_zero_coupling_identity(self):
        params = normalize(bare_set(), omega_fb=3 * OMEGA_M)
        assert params.omega_1 == pytest.approx(1.0, abs=0)
        assert params.omega_2 == pytest.approx(1.0, rel=1e-15)
        assert params.mu_tilde == 0.0
        assert params.kappa == pytest.approx(4.0, rel=1e-15)
        assert params.omega_fb == pytest.approx(3.0, rel=1e-15)

    def test_spring_shifts_frequency_and_sets_mu(self):
        # equal masses, 2*mu/(m*omega_tilde^2) = 0.04
        mu = 0.02 * OMEGA_M ** 2
        params = normalize(bare_set(mu=mu), omega_fb=3 * OMEGA_M)
        # normalized frequency sqrt(1.04)*omega_tilde is the new unit
        assert params.omega_1 == 1.0
        assert params.omega_2 == pytest.approx(1.0, rel=1e-15)
        # mu / (sqrt(m1 m2 w1 w2) * omega_m) with w_j = sqrt(1.04) omega_tilde
        assert params.mu_tilde == pytest.approx(0.02 / 1.04, rel=1e-14)

    def test_headline_caption_mapping(self):
        # bare set tuned to produce the published caption values
        target_G = (0.4, 0.28)
        drive = 2.0 * OMEGA_M
        c_mag = drive / (4 * OMEGA_M)    # resonant drive, Delta = 0
        lam = tuple(g * OMEGA_M / (math.sqrt(2.0) * c_mag) * math.sqrt(OMEGA_M)
                    for g in target_G)
        params = normalize(bare_set(drive=drive, lam=lam),
                           g_cd_1=1.0, g_cd_2=0.6, omega_fb=3 * OMEGA_M,
                           vartheta=0.8, nbar_1=1e3, nbar_2=1e3)
        assert params.kappa == pytest.approx(4.0, rel=1e-15)
        assert params.gamma_1 == pytest.approx(1e-6, rel=1e-12)
        assert params.G_1 == pytest.approx(0.4, rel=1e-12)
        assert params.G_2 == pytest.approx(0.28, rel=1e-12)
        assert params.Delta == 0.0
        assert params.vartheta == 0.8
        assert params.nbar_1 == 1e3

    def test_idempotent_on_normalized_input(self):
        bare = BareParams(omega_c=100.0, omega_L=100.0, drive=1.0, kappa=4.0,
                          omega_tilde_1=1.0, omega_tilde_2=1.0,
                          mass_1=1.0, mass_2=1.0, lam_1=0.1, lam_2=0.1,
                          gamma_1=1e-6, gamma_2=1e-6, mu=0.0)
        once = normalize(bare, omega_fb=3.0)
        assert once.omega_1 == 1.0 and once.omega_2 == 1.0
        assert once.kappa == 4.0 and once.gamma_1 == 1e-6
        assert once.omega_fb == 3.0

    def test_imaginary_frequency_rejected(self):
        with pytest.raises(ValueError, match="imaginary"):
            bare_set(mu=-0.51 * OMEGA_M ** 2)

    def test_detuning_fixed_point(self):
        mu = 0.01 * OMEGA_M ** 2
        lam = (0.02 * OMEGA_M ** 1.5, 0.015 * OMEGA_M ** 1.5)
        bare = BareParams(
            omega_c=101 * OMEGA_M, omega_L=100 * OMEGA_M, drive=2 * OMEGA_M,
            kappa=4 * OMEGA_M, omega_tilde_1=OMEGA_M, omega_tilde_2=OMEGA_M,
            mass_1=1.0, mass_2=1.0, lam_1=lam[0], lam_2=lam[1],
            gamma_1=1e-6 * OMEGA_M, gamma_2=1e-6 * OMEGA_M, mu=mu)
        params = normalize(bare, cold_damping=False, omega_fb=3 * OMEGA_M)
        # Delta = Delta_c - sum_j lam_j <q_j> must hold at the fixed point
        unit = bare.normalized_frequency(1)
        lam_t = [bare.lam_1 / math.sqrt(bare.normalized_frequency(1)) / unit,
                 bare.lam_2 / math.sqrt(bare.normalized_frequency(2)) / unit]
        _, q = steady_state_means(params.kappa, params.Delta, 2 * OMEGA_M / unit,
                                  tuple(lam_t),
                                  (params.omega_1, params.omega_2),
                                  params.mu_tilde)
        delta_c = (bare.omega_c - bare.omega_L) / unit
        residual = params.Delta - (delta_c - lam_t[0] * q[0] - lam_t[1] * q[1])
        assert abs(residual) < 1e-11


class TestSteadyState:
    def test_no_drive(self):
        c, q = steady_state_means(4.0, 0.0, 0.0, (0.1, 0.1))
        assert c == 0.0
        assert q == (0.0, 0.0)

    def test_resonant_magnitude(self):
        c, _ = steady_state_means(4.0, 0.0, 2.0)
        assert abs(c) == pytest.approx(0.5, rel=1e-15)

    def test_detuned_magnitude(self):
        c, _ = steady_state_means(4.0, 4.0, 2.0)
        assert abs(c) == pytest.approx(0.5 / math.sqrt(2.0), rel=1e-15)

    def test_static_force_balance(self):
        kappa, delta, drive = 4.0, 0.0, 2.0
        lam, mu = (0.3, 0.2), 0.05
        c, (q1, q2) = steady_state_means(kappa, delta, drive, lam,
                                         (1.0, 1.1), mu)
        nc = abs(c) ** 2
        assert 1.0 * q1 - 2 * mu * q2 == pytest.approx(lam[0] * nc, rel=1e-14)
        assert 1.1 * q2 - 2 * mu * q1 == pytest.approx(lam[1] * nc, rel=1e-14)


class TestThermal:
    def test_large_occupation(self):
        assert temperature_from_occupation(1e3, 1.0) == pytest.approx(
            1.0 / math.log(1001 / 1000), rel=1e-15)

    def test_half_occupation(self):
        assert temperature_from_occupation(0.5, 1.0) == pytest.approx(
            1.0 / math.log(3.0), rel=1e-15)

    def test_coth_round_trip(self):
        T = temperature_from_occupation(1e3, 1.0)
        assert 1.0 / math.tanh(1.0 / (2 * T)) == pytest.approx(2001.0,
                                                              rel=1e-12)

    def test_zero_occupation_signals(self):
        with pytest.raises(ValueError, match="zero-temperature"):
            temperature_from_occupation(0.0, 1.0)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(min_value=1e-3, max_value=1e6),
           st.floats(min_value=0.1, max_value=10.0))
    def test_round_trip_property(self, nbar, omega):
        T = temperature_from_occupation(nbar, omega)
        assert occupation_from_temperature(T, omega) == pytest.approx(
            nbar, rel=1e-12)

    def test_environment_matches_occupations(self):
        params = SystemParams(nbar_1=1e3, nbar_2=50.0)
        env = ThermalEnvironment.from_occupations(params)
        for j, nbar in ((1, 1e3), (2, 50.0)):
            coth = env.omega_coth(params.omega(j), j) / params.omega(j)
            assert coth == pytest.approx(2 * nbar + 1, rel=1e-12)

    def test_omega_coth_limits(self):
        env = ThermalEnvironment(2.0, 0.0)
        assert env.omega_coth(0.0, 1) == pytest.approx(4.0)
        assert env.omega_coth(-3.0, 2) == 3.0   # T = 0: |omega|
        w = np.array([-1.0, 0.0, 1.0])
        assert np.all(env.omega_coth(w, 1) == env.omega_coth(-w, 1))


class TestValidation:
    def test_vartheta_range(self):
        with pytest.raises(ValueError):
            SystemParams(vartheta=0.0)
        with pytest.raises(ValueError):
            SystemParams(vartheta=1.2)

    def test_positive_rates(self):
        with pytest.raises(ValueError):
            SystemParams(kappa=-1.0)
        with pytest.raises(ValueError):
            SystemParams(nbar_1=-0.5)

    def test_coupling_phase_convention(self):
        # real-positive cavity amplitude makes G_j >= 0 for lam_j >= 0
        params = normalize(bare_set(drive=OMEGA_M,
                                    lam=(0.1 * OMEGA_M ** 1.5,
                                         0.2 * OMEGA_M ** 1.5)),
                           omega_fb=3 * OMEGA_M)
        assert params.G_1 >= 0.0 and params.G_2 >= 0.0
