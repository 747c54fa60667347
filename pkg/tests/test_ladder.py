"""The coefficient ladder against an exact-rational independent evaluation.

Expected values were computed once with exact rational arithmetic from an
independent symbolic derivation of the closed-loop solution (not from this
package) at the headline parameter set with the spring on, at the
resonance frequency and at omega = 17/23.
"""
import math

import numpy as np
import pytest

from coldamp.ladder import compensated_sum, ladder
from coldamp.model import SystemParams

PARAMS = SystemParams(omega_1=1.0, omega_2=1.0, gamma_1=1e-6, gamma_2=1e-6,
                      kappa=4.0, Delta=0.0, G_1=0.4, G_2=0.28, g_cd_1=1.0,
                      g_cd_2=0.6, omega_fb=3.0, vartheta=0.8, mu_tilde=0.02,
                      nbar_1=1e3, nbar_2=1e3)

LADDER_AT_RESONANCE = {
    "a1": 7.0, "a2": 11.0, "a3": 1e-6, "a4": 4e-6, "a5": -2.999988,
    "a6": 12.000003, "a7": 0.504, "a8": 3.0, "a9": 12.0,
    "w1": 1e-6, "w2": 4e-6, "w3": -2.999988, "w4": 12.000003, "w5": 1.2,
    "w6": 3.0, "w7": 12.0,
    "b1": -3.7e-5, "b2": 3.9e-5, "b3": 3.528117, "b4": 5.544111,
    "c1": -3.528154, "c2": -5.544072,
    "d1": -0.56, "d2": -0.44, "d3": 0.44,
    "e1": 2.2531051488, "e2": 1.8451147616,
    "e3": 745.77855720276, "e4": -256.36727638148,
    "l1": -3.7e-5, "l2": 3.9e-5, "l3": 8.400117, "l4": 13.200111,
    "f1": -0.0436977537, "f2": -0.1040409537,
    "f3": -6408.744932, "f4": -15259.080932,
    "t1": 5.3645035488, "t2": 4.3930315616,
    "t3": 1775.6358370619592, "t4": -610.3807161602216,
    "y1": -8.400154, "y2": -13.200072,
    "n1": 0.5072, "n2": 0.25402708817, "n3": 0.000576000001,
    "n4": 0.0001123201591320261,
    "m1": 0.3872, "m2": 1.44002640017, "m3": 0.00160000000036,
    "m4": 0.0003697797104139085,
}

LADDER_OFF_RESONANCE = {
    "a1": 5.173913043478261, "a2": 11.453686200378072,
    "a3": -1.3413327103640996, "a4": 0.24785721721977837,
    "a5": -1.2113825991616668, "a6": 6.555767234404537,
    "a7": 0.3725217391304348, "a8": 2.217391304347826, "a9": 12.0,
    "w1": -1.3413327103640996, "w2": 0.24785721721977837,
    "w3": -1.2113825991616668, "w4": 6.555767234404537,
    "w5": 0.8869565217391304, "w6": 2.217391304347826, "w7": 12.0,
    "b1": -9.778817594331149, "b2": -14.080812265719369,
    "b3": -55.224137052265394, "b4": 43.95724204451612,
    "c1": 45.445319457934245, "c2": -58.038054310235486,
    "d1": -0.41391304347826086, "d2": -0.3252173913043478,
    "d3": 0.45814744801512287,
    "e1": 16.232009957036798, "e2": -19.758713474493985,
    "e3": 27499.359755730092, "e4": -58321.47298875714,
    "l1": -9.778817594331149, "l2": -14.080812265719369,
    "l3": -52.56249622050736, "l4": 49.84941661507583,
    "f1": -176462.18411400682, "f2": -176462.21257477317,
    "f3": -208016.21583259974, "f4": -215972.0997249148,
    "t1": 18.427669210503973, "t2": -19.30100640777615,
    "t3": 14316.160316697839, "t4": -28297.265518543228,
    "y1": 42.78367862617621, "y2": -63.930228880795197,
    "n1": 0.3812230916842064, "n2": 34.399974419946314,
    "n3": 0.2281841060321857, "n4": 0.039048547842999226,
    "m1": 0.31566543572957501, "m2": 37.463001986911097,
    "m3": 0.09747615824720122, "m4": 0.022061104546982923,
}


@pytest.mark.parametrize("omega,expected", [
    (1.0, LADDER_AT_RESONANCE),
    (17.0 / 23.0, LADDER_OFF_RESONANCE),
], ids=["resonance", "off-resonance"])
def test_full_ladder_against_symbolic_evaluation(omega, expected):
    lad = ladder(PARAMS, np.array([omega]))
    for name, value in expected.items():
        got = float(getattr(lad, name)[0])
        assert got == pytest.approx(value, rel=1e-9), name


def test_spring_off_cross_coefficients():
    p = PARAMS.replace(mu_tilde=0.0)
    w = np.array([0.7, 1.0, 2.3])
    lad = ladder(p, w)
    assert np.all(lad.d3 == 0.0)
    np.testing.assert_allclose(lad.d1, -p.G_2 * p.g_cd_1 * w * p.omega_fb,
                               rtol=1e-15)
    np.testing.assert_allclose(lad.d2, -p.G_1 * p.g_cd_2 * w * p.omega_fb,
                               rtol=1e-15)


def test_spring_off_cross_noise_weight():
    # n1 collapses to (G_2 g_cd1 w wfb)^2 * omega_2^2: the mechanical
    # cross-noise then survives only through the cavity channel
    p = PARAMS.replace(mu_tilde=0.0)
    w = np.array([0.9, 1.7])
    lad = ladder(p, w)
    np.testing.assert_allclose(
        lad.n1, p.omega_2 ** 2 * (p.G_2 * p.g_cd_1 * w * p.omega_fb) ** 2,
        rtol=1e-14)


def test_zero_frequency_values():
    lad = ladder(PARAMS, np.array([0.0]))
    assert lad.a1[0] == 0.0
    assert lad.a2[0] == PARAMS.kappa * PARAMS.omega_fb
    assert lad.x_cav[0] == PARAMS.kappa ** 2
    assert lad.y_fb[0] == PARAMS.omega_fb ** 2


def test_cross_noise_numerators_are_nonnegative():
    rng = np.random.default_rng(5)
    w = np.linspace(0.0, 8.0, 200)
    for _ in range(20):
        p = SystemParams(
            omega_1=1.0, omega_2=float(rng.uniform(0.5, 2.0)),
            gamma_1=10 ** rng.uniform(-7, -5), gamma_2=10 ** rng.uniform(-7, -5),
            kappa=float(rng.uniform(0.5, 8.0)), G_1=float(rng.uniform(0, 1)),
            G_2=float(rng.uniform(0, 1)), g_cd_1=float(rng.uniform(0, 2)),
            g_cd_2=float(rng.uniform(0, 2)),
            omega_fb=float(rng.uniform(0.5, 6.0)),
            vartheta=float(rng.uniform(0.3, 1.0)),
            mu_tilde=float(rng.uniform(0, 0.1)))
        lad = ladder(p, w)
        assert np.all(lad.n1 >= 0.0)
        assert np.all(lad.m1 >= 0.0)
        assert np.all(lad.n2 > 0.0)
        assert np.all(lad.m2 > 0.0)


def test_denominator_identity():
    # a1^2 + a2^2 factorizes into the cavity and feedback Lorentzians
    w = np.linspace(0.0, 5.0, 50)
    lad = ladder(PARAMS, w)
    np.testing.assert_allclose(lad.a1 ** 2 + lad.a2 ** 2,
                               lad.x_cav * lad.y_fb, rtol=1e-14)


def test_conjugate_pairs():
    w = np.linspace(0.1, 4.0, 17)
    lad = ladder(PARAMS, w)
    for plus, minus in ((lad.x_plus, lad.x_minus),
                        (lad.yc_plus, lad.yc_minus),
                        (lad.w_plus, lad.w_minus),
                        (lad.z_plus, lad.z_minus)):
        np.testing.assert_allclose(plus, np.conj(minus), rtol=1e-15)


def test_requires_zero_detuning():
    with pytest.raises(ValueError, match="Delta"):
        ladder(PARAMS.replace(Delta=0.5, g_cd_1=0.0, g_cd_2=0.0),
               np.array([1.0]))


def test_compensated_sum_beats_naive_accumulation():
    terms = [np.array([1e16]), np.array([1.0]), np.array([-1e16]),
             np.array([1.0])]
    assert compensated_sum(terms)[0] == 2.0
    rng = np.random.default_rng(0)
    data = [rng.uniform(-1, 1, 8) * 10.0 ** rng.integers(-8, 8)
            for _ in range(30)]
    exact = np.array([math.fsum(col) for col in np.array(data).T])
    np.testing.assert_allclose(compensated_sum(data), exact, rtol=1e-15,
                               atol=1e-300)
