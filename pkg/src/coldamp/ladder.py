"""Closed-form coefficient ladder behind the analytic spectra.

The net cooling rates, spring shifts and noise-channel weights of the
feedback-closed two-mode system reduce to families of real polynomial
coefficients in omega (a, w, b, c, d, e, y, l, f, t, n, m) plus four
complex conjugate pairs (x_pm, y_pm, w_pm, z_pm).  This module evaluates
the whole ladder exactly as a function of (params, omega), vectorized over
frequency grids.

Internal shorthand (renamed against symbol collisions):

    det_1, det_2   omega_j^2 - omega^2
    x_cav          kappa^2 + omega^2
    y_fb           omega_fb^2 + omega^2
    x_plus/minus   the complex pair built on (kappa +- i omega); distinct
                   from x_cav
    yc_plus/minus  complex pair paired with x_pm in n4 (distinct from the
                   real y1, y2)

The ladder is only defined for the zero-detuning feedback configuration
(Delta = 0).  Terms spanning many decades (gamma/omega_m ~ 1e-6) are
accumulated with Neumaier-compensated summation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemParams

__all__ = ["CoefficientLadder", "ladder", "compensated_sum"]


def compensated_sum(terms):
    """Neumaier-compensated elementwise sum of a sequence of arrays."""
    it = iter(terms)
    s = np.array(next(it), dtype=float, copy=True)
    comp = np.zeros_like(s)
    for t in it:
        t = np.asarray(t, dtype=float)
        new = s + t
        swap = np.abs(s) < np.abs(t)
        big = np.where(swap, t, s)
        small = np.where(swap, s, t)
        comp += (big - new) + small
        s = new
    return s + comp


@dataclass(frozen=True)
class CoefficientLadder:
    """Every coefficient of the closed-form spectra at the given omegas."""

    omega: np.ndarray
    det_1: np.ndarray
    det_2: np.ndarray
    x_cav: np.ndarray
    y_fb: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    a3: np.ndarray
    a4: np.ndarray
    a5: np.ndarray
    a6: np.ndarray
    a7: np.ndarray
    a8: np.ndarray
    a9: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    w4: np.ndarray
    w5: np.ndarray
    w6: np.ndarray
    w7: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    b3: np.ndarray
    b4: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    l1: np.ndarray
    l2: np.ndarray
    l3: np.ndarray
    l4: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    f3: np.ndarray
    f4: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    t3: np.ndarray
    t4: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    n3: np.ndarray
    n4: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    m3: np.ndarray
    m4: np.ndarray
    x_plus: np.ndarray
    x_minus: np.ndarray
    yc_plus: np.ndarray
    yc_minus: np.ndarray
    w_plus: np.ndarray
    w_minus: np.ndarray
    z_plus: np.ndarray
    z_minus: np.ndarray


def ladder(params: SystemParams, omega) -> CoefficientLadder:
    """Evaluate the full coefficient ladder at the given frequencies."""
    if params.Delta != 0.0:
        raise ValueError("the closed-form ladder requires zero effective "
                         "detuning (Delta = 0)")
    w = np.asarray(omega, dtype=float)
    p = params
    w1m, w2m = p.omega_1, p.omega_2
    g1, g2 = p.gamma_1, p.gamma_2
    k, wfb, mu = p.kappa, p.omega_fb, p.mu_tilde
    G1, G2, gc1, gc2 = p.G_1, p.G_2, p.g_cd_1, p.g_cd_2

    det_1 = (w1m - w) * (w1m + w)
    det_2 = (w2m - w) * (w2m + w)
    x_cav = k * k + w * w
    y_fb = wfb * wfb + w * w

    a1 = w * (k + wfb)
    a2 = k * wfb - w * w
    a3 = w * (g2 * w * w - k * det_2)
    a4 = w * w * (g2 * k + det_2)
    a5 = w * wfb * (g2 * k - w * w)
    a6 = w * w * wfb * (g2 + k)
    a7 = G2 * gc2 * w * w2m * wfb
    a8 = w * w2m * w2m * wfb
    a9 = k * w2m * w2m * wfb + 0.0 * w

    w1c = w * (g1 * w * w - k * det_1)
    w2c = w * w * (g1 * k + det_1)
    w3c = w * wfb * (g1 * k - w * w)
    w4c = w * w * wfb * (g1 + k)
    w5c = G1 * gc1 * w * w1m * wfb
    w6c = w * w1m * w1m * wfb
    w7c = k * w1m * w1m * wfb + 0.0 * w

    b1 = compensated_sum([a1 * a3, -a2 * a4])
    b2 = compensated_sum([a2 * a3, a1 * a4])
    b3 = compensated_sum([a1 * a5, a2 * a6, a1 * a7, a1 * a8, -a2 * a9])
    b4 = compensated_sum([a2 * a5, -a1 * a6, a2 * a7, a2 * a8, a1 * a9])
    c1 = b1 - b3
    c2 = b2 - b4

    d1 = 2.0 * mu * a1 - G2 * gc1 * w * wfb
    d2 = 2.0 * mu * a1 - G1 * gc2 * w * wfb
    d3 = 2.0 * mu * a2

    d = {1: d1, 2: d2, 3: d3}
    c = {1: c1, 2: c2}
    e = {}
    for j in (1, 2):
        sign = (-1.0) ** j
        e[j] = compensated_sum([
            c[1] * d[1] * d[j + 1],
            d[2] * d[3] * c[3 - j],
            sign * d[3] * d[3] * c[j],
            -sign * c[2] * d[1] * d[4 - j],
        ])

    a = {1: a1, 2: a2}
    l = {}
    for j in (1, 2):
        l[j] = compensated_sum([a[j] * w1c, (-1.0) ** j * a[3 - j] * w2c])
        l[j + 2] = compensated_sum([
            a[j] * (w3c + w5c + w6c),
            (-1.0) ** (j + 1) * a[3 - j] * (w4c - w7c),
        ])
    y1 = l[1] - l[3]
    y2 = l[2] - l[4]
    yv = {1: y1, 2: y2}

    wmode = {1: w1m, 2: w2m}
    gmode = {1: g1, 2: g2}
    Gmode = {1: G1, 2: G2}
    gcmode = {1: gc1, 2: gc2}
    x2y2 = (x_cav * x_cav) * (y_fb * y_fb)
    f = {}
    for j in (1, 2):
        go, wo, Go, gco = gmode[3 - j], wmode[3 - j], Gmode[3 - j], gcmode[3 - j]
        deto = det_1 if 3 - j == 1 else det_2
        f[j] = wmode[j] * wfb * x2y2 * compensated_sum([
            go * go * w * w * (w * w - k * wfb),
            -Go * gco * go * w * w * wo * wfb,
            deto * deto * (w * w - k * wfb),
        ])
    gsum = G2 * gc1 + G1 * gc2
    for j in (1, 2):
        go, wo, Go, gco = gmode[3 - j], wmode[3 - j], Gmode[3 - j], gcmode[3 - j]
        f[j + 2] = w1m * w2m * x2y2 * compensated_sum([
            (-gsum * w * w + 2.0 * Go * gco * mu * wo + gsum * wo * wo)
            * wfb * (w * w - k * wfb),
            go * gsum * w * w * wfb * (k + wfb),
            -go * 2.0 * mu * x_cav * y_fb,
        ])

    t = {}
    for j in (1, 2):
        sign = (-1.0) ** j
        t[j] = compensated_sum([
            d[j + 1] * d[1] * yv[1],
            sign * d[3] * d[3] * yv[j],
            -sign * d[1] * yv[2] * d[4 - j],
            d[2] * d[3] * yv[3 - j],
        ])

    asq = compensated_sum([a1 * a1, a2 * a2])          # = x_cav * y_fb
    csq = compensated_sum([c1 * c1, c2 * c2])
    ysq = compensated_sum([y1 * y1, y2 * y2])
    for j in (1, 2):
        sj = (-1.0) ** (j + 1)
        e[j + 2] = w1m * (e[j] * w2m * asq + sj * a[j] * G1 * gc1 * w * wfb * csq)
        t[j + 2] = w2m * (t[j] * w1m * asq + sj * a[j] * G2 * gc2 * w * wfb * ysq)

    kiw_p = k + 1j * w
    kiw_m = k - 1j * w
    wfb_p = w - 1j * wfb
    wfb_m = w + 1j * wfb

    f_p = 2.0 * mu * kiw_p * wfb_p - G2 * gc1 * w * wfb
    f_m = 2.0 * mu * kiw_m * wfb_m - G2 * gc1 * w * wfb
    wpair_p = 2.0 * mu * kiw_p * wfb_p - G1 * gc2 * w * wfb
    wpair_m = 2.0 * mu * kiw_m * wfb_m - G1 * gc2 * w * wfb
    x_p = w * (G2 * gc1 - G1 * gc2) / kiw_p
    x_m = w * (G2 * gc1 - G1 * gc2) / kiw_m
    yc_p = wfb_p * (G1 * w * (w - 1j * g2) - 2.0 * G2 * mu * w2m
                    - G1 * w2m * w2m) / wfb
    yc_m = wfb_m * (G1 * w * (w + 1j * g2) - 2.0 * G2 * mu * w2m
                    - G1 * w2m * w2m) / wfb
    z_p = wfb_m * (2.0 * G1 * mu * w1m + G2 * (det_1 - 1j * g1 * w)) / wfb
    z_m = wfb_p * (2.0 * G1 * mu * w1m + G2 * (det_1 + 1j * g1 * w)) / wfb

    n1 = w2m * w2m * (f_p * f_m).real
    n2 = compensated_sum([
        w * w * x_cav * (g2 * g2 * w * w + det_2 * det_2),
        -2.0 * G2 * gc2 * w * w * w2m * wfb * (w * w * g2 - k * det_2),
        wfb * wfb * compensated_sum([
            g2 * g2 * w * w * x_cav,
            2.0 * G2 * gc2 * g2 * k * w * w * w2m,
            k * k * det_2 * det_2,
            (w ** 3 - w * w2m * (G2 * gc2 + w2m)) ** 2,
        ]),
    ])
    n3 = compensated_sum([
        4.0 * gc2 * gc2 * mu * mu * w2m * w2m + 0.0 * w,
        4.0 * gc1 * gc2 * mu * w2m * det_2,
        gc1 * gc1 * (g2 * g2 * w * w + det_2 * det_2),
    ])
    # conjugate pairing of x_pm with yc_pm fixed by the response oracle
    n4 = ((G2 * w2m * x_p + yc_p) * (G2 * w2m * x_m + yc_m)).real

    m1 = w1m * w1m * (wpair_p * wpair_m).real
    m2 = compensated_sum([
        w * w * x_cav * (g1 * g1 * w * w + det_1 * det_1),
        -2.0 * G1 * gc1 * w * w * w1m * wfb * (w * w * g1 - k * det_1),
        wfb * wfb * compensated_sum([
            g1 * g1 * w * w * x_cav,
            2.0 * G1 * gc1 * g1 * k * w * w * w1m,
            k * k * det_1 * det_1,
            (w ** 3 - w * w1m * (G1 * gc1 + w1m)) ** 2,
        ]),
    ])
    m3 = compensated_sum([
        4.0 * gc1 * gc1 * mu * mu * w1m * w1m + 0.0 * w,
        4.0 * gc1 * gc2 * mu * w1m * det_1,
        gc2 * gc2 * (g1 * g1 * w * w + det_1 * det_1),
    ])
    m4 = ((G1 * w1m * x_p + z_m) * (G1 * w1m * x_m + z_p)).real

    return CoefficientLadder(
        omega=w, det_1=det_1, det_2=det_2, x_cav=x_cav, y_fb=y_fb,
        a1=a1, a2=a2, a3=a3, a4=a4, a5=a5, a6=a6, a7=a7, a8=a8, a9=a9,
        w1=w1c, w2=w2c, w3=w3c, w4=w4c, w5=w5c, w6=w6c, w7=w7c,
        b1=b1, b2=b2, b3=b3, b4=b4, c1=c1, c2=c2,
        d1=d1, d2=d2, d3=d3,
        e1=e[1], e2=e[2], e3=e[3], e4=e[4],
        y1=y1, y2=y2,
        l1=l[1], l2=l[2], l3=l[3], l4=l[4],
        f1=f[1], f2=f[2], f3=f[3], f4=f[4],
        t1=t[1], t2=t[2], t3=t[3], t4=t[4],
        n1=n1, n2=n2, n3=n3, n4=n4,
        m1=m1, m2=m2, m3=m3, m4=m4,
        x_plus=x_p, x_minus=x_m, yc_plus=yc_p, yc_minus=yc_m,
        w_plus=wpair_p, w_minus=wpair_m, z_plus=z_p, z_minus=z_m)
