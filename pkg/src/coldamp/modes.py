"""Bright/dark-mode algebra for the two mechanical modes.

Within the rotating-wave picture the two modes couple to the cavity either
directly (couplings G_1, G_2) or, after hybridization, through one bright
and one dark superposition.  The direct mechanical spring rotates the
hybrid basis and redistributes the couplings; a vanishing hybrid coupling
marks a decoupled (dark) mode that blocks phonon extraction.

The beam-splitter strength of the spring term is eta = -mu_tilde (the
rotating-wave reduction of -2 mu_tilde q_1 q_2); only |eta| enters the
hybrid frequencies, while the sign fixes which +- branch carries the
near-dark combination.  All invariants and the residual metric are
independent of that labeling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import SystemParams

__all__ = ["ModeHybridization", "bright_dark", "amc_diagonalize",
           "dark_mode_residual"]


@dataclass(frozen=True)
class ModeHybridization:
    """Hybrid-mode frequencies, transform coefficients and couplings."""

    omega_plus: float
    omega_minus: float
    g_plus: float           # bright coupling, no direct spring
    g_minus: float          # dark-channel coupling, no direct spring
    f: float                # orthonormal transform coefficients
    h: float
    g_tilde_plus: float     # couplings after diagonalizing the spring
    g_tilde_minus: float
    eta: float              # rotating-wave spring strength (= -mu_tilde)


def bright_dark(params: SystemParams):
    """Hybrid frequencies and couplings without the direct spring.

    Returns ((omega_plus, omega_minus), (g_plus, g_minus)); g_minus = 0 at
    degeneracy, where the dark superposition decouples completely.
    """
    G1, G2 = params.G_1, params.G_2
    g0sq = G1 * G1 + G2 * G2
    if g0sq == 0.0:
        raise ValueError("no optomechanical coupling: G_1 = G_2 = 0")
    w1, w2 = params.omega_1, params.omega_2
    omega_plus = (G1 * G1 * w1 + G2 * G2 * w2) / g0sq
    omega_minus = (G2 * G2 * w1 + G1 * G1 * w2) / g0sq
    g_plus = math.sqrt(g0sq)
    g_minus = G1 * G2 * (w1 - w2) / g0sq
    return (omega_plus, omega_minus), (g_plus, g_minus)


def amc_diagonalize(params: SystemParams) -> ModeHybridization:
    """Hybrid modes of the spring-coupled mechanical pair.

    Degenerate input (omega_1 == omega_2) takes the explicit branch
    g_tilde_pm = (G_1 -+ G_2)/sqrt(2), the eta < 0 limit of the general
    transform; eta -> 0 with distinct frequencies reduces to the identity
    (f, h) = (1, 0).
    """
    p = params
    eta = -p.mu_tilde
    w1, w2 = p.omega_1, p.omega_2
    split = math.sqrt((w1 - w2) ** 2 + 4.0 * eta * eta)
    omega_p = 0.5 * (w1 + w2 + split)
    omega_m = 0.5 * (w1 + w2 - split)

    (_, _), (g_plus, g_minus) = bright_dark(p)

    if w1 == w2:
        inv = 1.0 / math.sqrt(2.0)
        f, h = inv, (-inv if eta > 0.0 else inv)
    else:
        dm = omega_m - w1
        if dm == 0.0 or eta == 0.0:
            # branch point: eta -> 0 with distinct frequencies
            f, h = 1.0, 0.0
        else:
            f = abs(dm) / math.sqrt(dm * dm + eta * eta)
            h = eta * f / dm
    gt_p = f * p.G_1 - h * p.G_2
    gt_m = h * p.G_1 + f * p.G_2
    return ModeHybridization(omega_plus=omega_p, omega_minus=omega_m,
                             g_plus=g_plus, g_minus=g_minus,
                             f=f, h=h, g_tilde_plus=gt_p, g_tilde_minus=gt_m,
                             eta=eta)


def dark_mode_residual(params: SystemParams) -> float:
    """min(|g_tilde_+|, |g_tilde_-|) / sqrt(G_1^2 + G_2^2).

    Zero exactly when one hybrid mode decouples from the cavity; the
    cooling of both modes collapses wherever this vanishes, including at
    the finite detuning omega_2 - omega_1 = mu_tilde (G_1/G_2 - G_2/G_1)
    where the spring re-forms a dark superposition.
    """
    hyb = amc_diagonalize(params)
    g0 = math.hypot(params.G_1, params.G_2)
    return min(abs(hyb.g_tilde_plus), abs(hyb.g_tilde_minus)) / g0
