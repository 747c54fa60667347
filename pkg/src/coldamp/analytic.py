"""Closed-form effective susceptibilities, cooling rates and noise spectra.

The position spectrum of each mode factorizes as

    S_q_j(omega) = |chi_eff_j|^2 * (S_fb + S_rp + S_th + S_me)

with chi_eff_j = omega_j / (Omega_eff_j^2 - omega^2 - i omega Gamma_eff_j).
Everything here is a pure function of (params, omega) evaluated through the
coefficient ladder; the independent linear-response computation lives in
:mod:`coldamp.oracle`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ladder import CoefficientLadder, ladder
from .model import SystemParams, ThermalEnvironment

__all__ = [
    "DegenerateDenominatorError",
    "ImaginaryShiftError",
    "ResonanceSingularityError",
    "SpectrumDecomposition",
    "net_cooling_rate",
    "effective_damping",
    "effective_frequency_sq",
    "spring_shift",
    "susceptibility",
    "noise_spectra",
    "position_spectrum",
    "spectrum",
]

_TINY = 1e-300


class DegenerateDenominatorError(ArithmeticError):
    """A ladder denominator underflowed below working precision."""


class ImaginaryShiftError(ArithmeticError):
    """The shifted-frequency radicand went negative."""


class ResonanceSingularityError(ArithmeticError):
    """chi_eff has an exact pole on the real axis."""


def _ladder_of(params, omega, lad):
    return lad if lad is not None else ladder(params, omega)


def _denominators(lad: CoefficientLadder):
    asq = lad.a1 * lad.a1 + lad.a2 * lad.a2
    den1 = asq * (lad.c1 * lad.c1 + lad.c2 * lad.c2)
    den2 = asq * (lad.y1 * lad.y1 + lad.y2 * lad.y2)
    if np.any(den1 < _TINY) or np.any(den2 < _TINY):
        bad = lad.omega[np.minimum(den1, den2) < _TINY]
        raise DegenerateDenominatorError(
            f"degenerate denominator at omega = {np.atleast_1d(bad)[:5]}")
    return den1, den2


def net_cooling_rate(params: SystemParams, omega, lad=None):
    """Feedback/AMC-induced addition to the mechanical damping, per mode.

    Returns an array of shape (2,) + omega.shape.
    """
    lad = _ladder_of(params, omega, lad)
    den1, den2 = _denominators(lad)
    g1c = -(params.G_1 * params.g_cd_1 * lad.f1 + 2.0 * params.mu_tilde * lad.f3) / den1
    g2c = -(params.G_2 * params.g_cd_2 * lad.f2 + 2.0 * params.mu_tilde * lad.f4) / den2
    return np.stack([g1c, g2c])


def effective_damping(params: SystemParams, omega, lad=None):
    """Gamma_eff_j(omega) = gamma_j + net cooling rate."""
    rates = net_cooling_rate(params, omega, lad)
    return rates + np.array([params.gamma_1, params.gamma_2]).reshape(
        (2,) + (1,) * (rates.ndim - 1))


def effective_frequency_sq(params: SystemParams, omega, lad=None):
    """Squared effective resonance frequencies Omega_eff_j^2(omega)."""
    lad = _ladder_of(params, omega, lad)
    den1, den2 = _denominators(lad)
    return np.stack([params.omega_1 ** 2 + lad.e3 / den1,
                     params.omega_2 ** 2 + lad.t3 / den2])


def spring_shift(params: SystemParams, omega, lad=None):
    """Optical-spring shifts delta_omega_j(omega) = Omega_eff_j - omega_j."""
    osq = effective_frequency_sq(params, omega, lad)
    if np.any(osq < 0.0):
        w = np.broadcast_to(np.asarray(omega, dtype=float), osq[0].shape)
        bad = w[(osq < 0.0).any(axis=0)]
        raise ImaginaryShiftError(
            f"imaginary shifted frequency at omega = {np.atleast_1d(bad)[:5]}")
    return np.sqrt(osq) - np.array([params.omega_1, params.omega_2]).reshape(
        (2,) + (1,) * (osq.ndim - 1))


def susceptibility(params: SystemParams, omega, lad=None):
    """Effective (closed-loop) mechanical susceptibilities chi_eff_j(omega)."""
    lad = _ladder_of(params, omega, lad)
    w = lad.omega
    osq = effective_frequency_sq(params, omega, lad)
    geff = effective_damping(params, omega, lad)
    den = osq - w * w - 1j * w * geff
    if np.any(den == 0.0):
        bad = np.broadcast_to(w, den.shape)[den == 0.0]
        raise ResonanceSingularityError(
            f"resonance singularity at omega = {np.atleast_1d(bad)[:5]}")
    return np.array([params.omega_1, params.omega_2]).reshape(
        (2,) + (1,) * (den.ndim - 1)) / den


def noise_spectra(params: SystemParams, omega, lad=None, env=None):
    """The four noise channels per mode: (S_th, S_me, S_fb, S_rp).

    Each entry has shape (2,) + omega.shape.  The thermal kernels use
    omega*coth(omega/2T_j) with the analytic omega -> 0 limit.
    """
    lad = _ladder_of(params, omega, lad)
    if env is None:
        env = ThermalEnvironment.from_occupations(params)
    w = lad.omega
    th1 = params.gamma_1 / params.omega_1 * env.omega_coth(w, 1)
    th2 = params.gamma_2 / params.omega_2 * env.omega_coth(w, 2)
    s_th = np.stack([th1, th2])
    s_me = np.stack([lad.n1 / lad.n2 * th2, lad.m1 / lad.m2 * th1])
    meas = w * w * lad.x_cav * params.omega_fb ** 2 / (4.0 * params.kappa * params.vartheta)
    s_fb = np.stack([meas * lad.n3 / lad.n2, meas * lad.m3 / lad.m2])
    rp = params.kappa * params.omega_fb ** 2
    s_rp = np.stack([rp * lad.n4 / lad.n2, rp * lad.m4 / lad.m2])
    return s_th, s_me, s_fb, s_rp


def position_spectrum(params: SystemParams, omega, lad=None, env=None):
    """Total position spectra S_q_j(omega), shape (2,) + omega.shape.

    Avoids the square root of the shifted frequency, so it stays defined
    even where the spring shift itself would be imaginary.
    """
    lad = _ladder_of(params, omega, lad)
    w = lad.omega
    osq = effective_frequency_sq(params, omega, lad)
    geff = effective_damping(params, omega, lad)
    chi2 = np.array([params.omega_1 ** 2, params.omega_2 ** 2]).reshape(
        (2,) + (1,) * osq[0].ndim) / ((osq - w * w) ** 2 + (w * geff) ** 2)
    s_th, s_me, s_fb, s_rp = noise_spectra(params, omega, lad, env)
    return chi2 * (s_th + s_me + s_fb + s_rp)


@dataclass(frozen=True)
class SpectrumDecomposition:
    """Per-mode, per-frequency spectral quantities (arrays shaped (2, n))."""

    omega: np.ndarray
    chi_eff: np.ndarray
    gamma_eff: np.ndarray
    omega_eff: np.ndarray
    gamma_c: np.ndarray
    spring: np.ndarray
    s_th: np.ndarray
    s_me: np.ndarray
    s_fb: np.ndarray
    s_rp: np.ndarray
    s_q: np.ndarray


def spectrum(params: SystemParams, omega, env=None) -> SpectrumDecomposition:
    """Full spectral decomposition on a frequency grid."""
    lad = ladder(params, omega)
    gamma_c = net_cooling_rate(params, omega, lad)
    pair = lambda a, b, arr: np.array([a, b]).reshape((2,) + (1,) * arr[0].ndim)
    gamma_eff = gamma_c + pair(params.gamma_1, params.gamma_2, gamma_c)
    shift = spring_shift(params, omega, lad)
    omega_eff = shift + pair(params.omega_1, params.omega_2, shift)
    chi = susceptibility(params, omega, lad)
    s_th, s_me, s_fb, s_rp = noise_spectra(params, omega, lad, env)
    s_q = np.abs(chi) ** 2 * (s_th + s_me + s_fb + s_rp)
    return SpectrumDecomposition(
        omega=lad.omega, chi_eff=chi, gamma_eff=gamma_eff, omega_eff=omega_eff,
        gamma_c=gamma_c, spring=shift,
        s_th=s_th, s_me=s_me, s_fb=s_fb, s_rp=s_rp, s_q=s_q)
