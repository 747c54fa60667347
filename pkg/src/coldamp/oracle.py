"""Independent frequency-domain linear-response computation.

Assembles the feedback-closed fluctuation dynamics over the state
(dX, dY, dq_1, dp_1, dq_2, dp_2) and solves

    M(omega) u(omega) = B(omega) n(omega),   u = T n,

per frequency by partial-pivoted LU, with five noise inputs
(X_in, Y_in, Y_v, xi_1, xi_2).  Spectra follow from S_u = diag(T C_in T+).
This path never touches the closed-form coefficient ladder, so agreement
with :mod:`coldamp.analytic` is a genuine dual-route check.

Fourier convention: r(t) = (2 pi)^(-1/2) Int e^{-i omega t} r~(omega) d omega,
so d/dt -> -i omega and the causal feedback kernel transforms to
H_fb_j(omega) = g_cd_j * (-i omega) * omega_fb / (omega_fb - i omega).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemParams, ThermalEnvironment

__all__ = [
    "SingularSystemError",
    "TransferSolution",
    "OracleSpectrum",
    "StabilityReport",
    "feedback_transfer",
    "assemble",
    "oracle_spectrum",
    "oracle_susceptibility",
    "oracle_effective_damping",
    "vacuum_cross_term",
    "closed_loop_matrix",
    "stability_check",
]

_COND_LIMIT = 1e14

# state and noise orderings used throughout
_STATE = ("dX", "dY", "dq1", "dp1", "dq2", "dp2")
_NOISE = ("X_in", "Y_in", "Y_v", "xi1", "xi2")
_IQ = {1: 2, 2: 4}          # position indices
_IXI = {1: 3, 2: 4}         # noise-column indices of xi_j


class SingularSystemError(ArithmeticError):
    """The per-frequency linear solve is numerically singular."""


def feedback_transfer(params: SystemParams, omega):
    """Transfer functions H_fb_j(omega) of the causal feedback kernels.

    Derivative of a one-pole low-pass: zero at DC, magnitude bounded by
    g_cd_j * omega_fb at high frequency.
    """
    w = np.asarray(omega, dtype=float)
    base = -1j * w * params.omega_fb / (params.omega_fb - 1j * w)
    return params.g_cd_1 * base, params.g_cd_2 * base


@dataclass(frozen=True)
class TransferSolution:
    """Per-frequency system matrix, noise routing and input correlations."""

    omega: np.ndarray          # (n,)
    system: np.ndarray         # M(omega), (n, 6, 6) complex
    transfer: np.ndarray       # T(omega) = M^-1 B, (n, 6, 5) complex
    c_in: np.ndarray           # input spectral matrix, (n, 5, 5) complex

    def position_transfer(self, j: int):
        return self.transfer[:, _IQ[j], :]

    def chi_eff(self, j: int):
        """Closed-loop susceptibility read off the (q_j, xi_j) entry."""
        return self.transfer[:, _IQ[j], _IXI[j]]


def _drift(params: SystemParams, w):
    """Frequency-dependent drift A(omega), shape (n, 6, 6)."""
    n = w.size
    A = np.zeros((n, 6, 6), dtype=complex)
    p = params
    if p.Delta != 0.0 and (p.g_cd_1 != 0.0 or p.g_cd_2 != 0.0):
        raise ValueError("the feedback loop is defined at zero effective "
                         "detuning; set Delta = 0 or the gains to 0")
    H1, H2 = feedback_transfer(params, w)
    A[:, 0, 0] = -p.kappa
    A[:, 0, 1] = p.Delta
    A[:, 1, 0] = -p.Delta
    A[:, 1, 1] = -p.kappa
    A[:, 1, 2] = p.G_1
    A[:, 1, 4] = p.G_2
    A[:, 2, 3] = p.omega_1
    A[:, 4, 5] = p.omega_2
    A[:, 3, 0] = p.G_1
    A[:, 3, 1] = -H1
    A[:, 3, 2] = -p.omega_1
    A[:, 3, 3] = -p.gamma_1
    A[:, 3, 4] = 2.0 * p.mu_tilde
    A[:, 5, 0] = p.G_2
    A[:, 5, 1] = -H2
    A[:, 5, 2] = 2.0 * p.mu_tilde
    A[:, 5, 4] = -p.omega_2
    A[:, 5, 5] = -p.gamma_2
    return A


def _noise_routing(params: SystemParams, w):
    """Noise input matrix B(omega), shape (n, 6, 5)."""
    n = w.size
    B = np.zeros((n, 6, 5), dtype=complex)
    s2k = np.sqrt(2.0 * params.kappa)
    H1, H2 = feedback_transfer(params, w)
    mix = np.sqrt(1.0 / params.vartheta - 1.0)
    B[:, 0, 0] = s2k
    B[:, 1, 1] = s2k
    # estimated-quadrature correction feeds the measurement noises forward
    B[:, 3, 1] = H1 / s2k
    B[:, 3, 2] = H1 * mix / s2k
    B[:, 3, 3] = 1.0
    B[:, 5, 1] = H2 / s2k
    B[:, 5, 2] = H2 * mix / s2k
    B[:, 5, 4] = 1.0
    return B


def input_spectral_matrix(params: SystemParams, omega, env=None,
                          symmetrized: bool = True):
    """Hermitian input correlation matrix C_in(omega), shape (n, 5, 5).

    Vacuum quadratures carry 1/2; the Brownian inputs carry the
    symmetrized (gamma_j omega/omega_j) coth(omega/2T_j), or the raw
    (gamma_j omega/omega_j)[1 + coth] when ``symmetrized=False``.
    X_in-Y_in vacuum cross terms are excluded (their symmetrized
    contribution vanishes identically; see :func:`vacuum_cross_term`).
    """
    w = np.asarray(omega, dtype=float)
    if env is None:
        env = ThermalEnvironment.from_occupations(params)
    n = w.size
    C = np.zeros((n, 5, 5), dtype=complex)
    C[:, 0, 0] = 0.5
    C[:, 1, 1] = 0.5
    C[:, 2, 2] = 0.5
    for j, col in ((1, 3), (2, 4)):
        gj = params.gamma(j) / params.omega(j)
        if symmetrized:
            C[:, col, col] = gj * env.omega_coth(w, j)
        else:
            C[:, col, col] = gj * (w + env.omega_coth(w, j))
    return C


def assemble(params: SystemParams, omega, env=None) -> TransferSolution:
    """Build and solve the per-frequency linear system."""
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    A = _drift(params, w)
    M = -1j * w[:, None, None] * np.eye(6)[None, :, :] - A
    cond = np.linalg.cond(M)
    if np.any(~np.isfinite(cond)) or np.any(cond > _COND_LIMIT):
        bad = w[~np.isfinite(cond) | (cond > _COND_LIMIT)]
        raise SingularSystemError(
            f"singular system at omega = {np.atleast_1d(bad)[:5]}")
    T = np.linalg.solve(M, _noise_routing(params, w))
    return TransferSolution(omega=w, system=M, transfer=T,
                            c_in=input_spectral_matrix(params, w, env))


@dataclass(frozen=True)
class OracleSpectrum:
    """Symmetrized spectra and diagnostics from the linear-response solve."""

    omega: np.ndarray
    s_q: np.ndarray            # (2, n) position spectra
    s_p: np.ndarray            # (2, n) momentum spectra
    raw_asymmetry: np.ndarray  # (2, n) S_raw(omega) - S_raw(-omega)


def _diag_spectra(sol: TransferSolution):
    return np.einsum("nik,nkl,nil->ni", sol.transfer, sol.c_in,
                     sol.transfer.conj()).real


def oracle_spectrum(params: SystemParams, omega, env=None) -> OracleSpectrum:
    """Position and momentum spectra S_q_j, S_p_j (symmetrized over +-omega).

    S_p_j is tied to S_q_j through the exact kinematic identity
    S_p = (omega/omega_j)^2 S_q.  The pre-symmetrization asymmetry of the
    raw (unsymmetrized-bath) solve is recorded as a diagnostic.
    """
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if env is None:
        env = ThermalEnvironment.from_occupations(params)
    sol_p = assemble(params, w, env)
    sol_m = assemble(params, -w, env)
    s_all = 0.5 * (_diag_spectra(sol_p) + _diag_spectra(sol_m))
    s_q = np.stack([s_all[:, _IQ[1]], s_all[:, _IQ[2]]])
    s_p = s_q * (w * w) / np.array([[params.omega_1 ** 2], [params.omega_2 ** 2]])

    raw = []
    for ww in (w, -w):
        solr = assemble(params, ww, env)
        c_raw = input_spectral_matrix(params, ww, env, symmetrized=False)
        sr = np.einsum("nik,nkl,nil->ni", solr.transfer, c_raw,
                       solr.transfer.conj()).real
        raw.append(np.stack([sr[:, _IQ[1]], sr[:, _IQ[2]]]))
    return OracleSpectrum(omega=w, s_q=s_q, s_p=s_p,
                          raw_asymmetry=raw[0] - raw[1])


def oracle_position_spectrum(params: SystemParams, omega, env=None):
    """S_q_j only (cheaper; used as integrand by the cooling engine)."""
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    sol = assemble(params, w, env)
    s_all = _diag_spectra(sol)
    return np.stack([s_all[:, _IQ[1]], s_all[:, _IQ[2]]])


def oracle_susceptibility(params: SystemParams, omega, env=None):
    """Closed-loop susceptibilities chi_eff_j extracted from the solve."""
    sol = assemble(params, omega, env)
    return np.stack([sol.chi_eff(1), sol.chi_eff(2)])


def oracle_effective_damping(params: SystemParams, omega):
    """Gamma_eff_j(omega) = -Im[omega_j / chi_eff_j] / omega."""
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    chi = oracle_susceptibility(params, w)
    wj = np.array([[params.omega_1], [params.omega_2]])
    return -(wj / chi).imag / w


def vacuum_cross_term(params: SystemParams, omega):
    """S_q contribution of the excluded X_in-Y_in vacuum cross correlation.

    The term is odd in omega, so its symmetrized part (and its variance
    integral) vanishes; this diagnostic returns the raw odd part.
    """
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    sol = assemble(params, w)
    c_off = np.zeros((w.size, 5, 5), dtype=complex)
    c_off[:, 0, 1] = -0.5j
    c_off[:, 1, 0] = 0.5j
    s = np.einsum("nik,nkl,nil->ni", sol.transfer, c_off,
                  sol.transfer.conj()).real
    return np.stack([s[:, _IQ[1]], s[:, _IQ[2]]])


def closed_loop_matrix(params: SystemParams) -> np.ndarray:
    """Exact 7-state closed-loop drift matrix (deterministic part).

    The causal kernel is realized by one shared low-pass filter state z
    with zdot = omega_fb (dY - z); the feedback force on dp_j is then
    -g_cd_j omega_fb (dY - z), which reproduces H_fb_j(omega) exactly.
    """
    p = params
    A = np.zeros((7, 7))
    A[0, 0] = -p.kappa
    A[0, 1] = p.Delta
    A[1, 0] = -p.Delta
    A[1, 1] = -p.kappa
    A[1, 2] = p.G_1
    A[1, 4] = p.G_2
    A[2, 3] = p.omega_1
    A[4, 5] = p.omega_2
    A[3, 0] = p.G_1
    A[3, 2] = -p.omega_1
    A[3, 3] = -p.gamma_1
    A[3, 4] = 2.0 * p.mu_tilde
    A[5, 0] = p.G_2
    A[5, 2] = 2.0 * p.mu_tilde
    A[5, 4] = -p.omega_2
    A[5, 5] = -p.gamma_2
    if p.Delta == 0.0:
        A[3, 1] = -p.g_cd_1 * p.omega_fb
        A[3, 6] = p.g_cd_1 * p.omega_fb
        A[5, 1] = -p.g_cd_2 * p.omega_fb
        A[5, 6] = p.g_cd_2 * p.omega_fb
    A[6, 1] = p.omega_fb
    A[6, 6] = -p.omega_fb
    return A


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    max_eig_real: float
    min_gamma_eff_near_peaks: float
    det_min_ratio: float
    warnings: tuple[str, ...]


def stability_check(params: SystemParams, grid=None,
                    diagnostics: bool = True) -> StabilityReport:
    """Stability flag plus the frequency-domain diagnostics.

    The binding determination is the exact closed-loop eigenvalue test
    (all real parts < 0).  With ``diagnostics=True`` two grid indicators
    are reported alongside: the minimum of Gamma_eff within the half-power
    region of each spectral peak, and min|det M| / median|det M| on the
    grid (a near-zero marks a pole pinching the real axis).
    """
    eigs = np.linalg.eigvals(closed_loop_matrix(params))
    max_re = float(eigs.real.max())
    stable = max_re < 0.0

    if not diagnostics:
        return StabilityReport(
            stable=stable, max_eig_real=max_re,
            min_gamma_eff_near_peaks=float("nan"), det_min_ratio=float("nan"),
            warnings=() if stable else
            (f"closed-loop eigenvalue with Re = {max_re:.3e} >= 0",))

    if grid is None:
        top = 1.5 * max(params.omega_1, params.omega_2)
        grid = np.linspace(1e-3, top, 512)
    grid = np.asarray(grid, dtype=float)

    warnings = []
    gam = oracle_effective_damping(params, grid)
    sol = assemble(params, grid)
    s_all = _diag_spectra(sol)
    min_gam = np.inf
    for j in (1, 2):
        # "near resonance" = the half-power region of the position spectrum
        s = s_all[:, _IQ[j]]
        window = s >= 0.5 * s.max()
        min_gam = min(min_gam, float(gam[j - 1, window].min()))
    if min_gam < 0.0:
        warnings.append("negative effective damping near a resonance peak")

    dets = np.abs(np.linalg.det(sol.system))
    ratio = float(dets.min() / np.median(dets))
    if ratio < 1e-10:
        warnings.append("near-singular system matrix on the real axis")
    if not stable:
        warnings.append(f"closed-loop eigenvalue with Re = {max_re:.3e} >= 0")
    return StabilityReport(stable=stable, max_eig_real=max_re,
                           min_gamma_eff_near_peaks=float(min_gam),
                           det_min_ratio=ratio, warnings=tuple(warnings))
