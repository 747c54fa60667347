"""Parameter model for a feedback-cooled two-mode optomechanical system.

Conventions used throughout the package:

* natural units, hbar = k_B = 1;
* every frequency, rate and coupling in :class:`SystemParams` is
  dimensionless, expressed in units of the normalized mode-1 mechanical
  frequency omega_m (the reference unit, physically ~2*pi*1e7 rad/s);
* mode indices j = 1, 2; the cavity couples to both modes, the AMC spring
  mu_tilde couples the two modes directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "BareParams",
    "SystemParams",
    "ThermalEnvironment",
    "normalize",
    "steady_state_means",
    "temperature_from_occupation",
    "occupation_from_temperature",
]


@dataclass(frozen=True)
class BareParams:
    """Laboratory-frame parameters of the driven three-mode system.

    All quantities carry SI-like units: frequencies and rates in rad/s,
    masses in kg, position couplings lam_j in rad/s per meter and the
    direct spring constant mu in J/m^2 (hbar = 1).
    """

    omega_c: float          # cavity frequency
    omega_L: float          # drive frequency
    drive: float            # drive amplitude (Omega)
    kappa: float            # cavity amplitude decay
    omega_tilde_1: float    # bare mechanical frequencies
    omega_tilde_2: float
    mass_1: float
    mass_2: float
    lam_1: float            # optomechanical position couplings
    lam_2: float
    gamma_1: float          # mechanical damping rates
    gamma_2: float
    mu: float = 0.0         # direct mechanical spring constant

    def __post_init__(self):
        for name in ("omega_c", "omega_L", "kappa", "omega_tilde_1",
                     "omega_tilde_2", "mass_1", "mass_2", "gamma_1", "gamma_2"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        for j in (1, 2):
            wt = getattr(self, f"omega_tilde_{j}")
            m = getattr(self, f"mass_{j}")
            if wt * wt + 2.0 * self.mu / m <= 0.0:
                raise ValueError(
                    f"normalized frequency of mode {j} would be imaginary: "
                    f"omega_tilde^2 + 2*mu/m = {wt * wt + 2.0 * self.mu / m:g}")

    def normalized_frequency(self, j: int) -> float:
        """sqrt(omega_tilde_j^2 + 2 mu / m_j), in rad/s."""
        wt = getattr(self, f"omega_tilde_{j}")
        m = getattr(self, f"mass_{j}")
        return math.sqrt(wt * wt + 2.0 * self.mu / m)


@dataclass(frozen=True)
class SystemParams:
    """Complete dimensionless parameter set of the linearized feedback model.

    Every spectral formula in the package consumes exactly this set; there
    are no hidden parameters.  Units of omega_m throughout; nbar_j and the
    feedback gains g_cd_j are dimensionless, vartheta is the homodyne
    detection efficiency.
    """

    omega_1: float = 1.0
    omega_2: float = 1.0
    gamma_1: float = 1e-6
    gamma_2: float = 1e-6
    kappa: float = 4.0
    Delta: float = 0.0
    G_1: float = 0.4
    G_2: float = 0.28
    g_cd_1: float = 1.0
    g_cd_2: float = 0.6
    omega_fb: float = 3.0
    vartheta: float = 0.8
    mu_tilde: float = 0.0
    nbar_1: float = 1e3
    nbar_2: float = 1e3

    def __post_init__(self):
        for name in ("omega_1", "omega_2", "gamma_1", "gamma_2", "kappa",
                     "omega_fb"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if not 0.0 < self.vartheta <= 1.0:
            raise ValueError("vartheta must lie in (0, 1]")
        if self.nbar_1 < 0.0 or self.nbar_2 < 0.0:
            raise ValueError("thermal occupations must be >= 0")

    def replace(self, **kw) -> "SystemParams":
        return replace(self, **kw)

    def omega(self, j: int) -> float:
        return self.omega_1 if j == 1 else self.omega_2

    def gamma(self, j: int) -> float:
        return self.gamma_1 if j == 1 else self.gamma_2

    def coupling(self, j: int) -> float:
        return self.G_1 if j == 1 else self.G_2

    def gain(self, j: int) -> float:
        return self.g_cd_1 if j == 1 else self.g_cd_2


def temperature_from_occupation(nbar: float, omega: float) -> float:
    """Bath temperature giving mean occupation nbar at frequency omega.

    Inverts nbar = 1/(exp(omega/T) - 1), i.e. T = omega / ln((nbar+1)/nbar).
    Raises for nbar = 0: a zero-temperature bath has no finite T and must be
    handled in the spectra through the coth -> sign limit instead.
    """
    if nbar == 0.0:
        raise ValueError("zero-temperature bath: nbar = 0 has no finite T; "
                         "use the coth -> 1 limit in the spectra directly")
    if nbar < 0.0:
        raise ValueError("nbar must be >= 0")
    if omega <= 0.0:
        raise ValueError("omega must be > 0")
    return omega / math.log1p(1.0 / nbar)


def occupation_from_temperature(T: float, omega: float) -> float:
    """Bose occupation 1/(exp(omega/T) - 1); T = 0 maps to 0."""
    if T < 0.0:
        raise ValueError("temperature must be >= 0")
    if omega <= 0.0:
        raise ValueError("omega must be > 0")
    if T == 0.0:
        return 0.0
    return 1.0 / math.expm1(omega / T)


@dataclass(frozen=True)
class ThermalEnvironment:
    """Bath temperatures of the two mechanical modes (units of omega_m).

    temperature_j = 0 encodes a zero-temperature bath; :meth:`omega_coth`
    then evaluates the T -> 0 limit |omega| directly.
    """

    temperature_1: float
    temperature_2: float

    @classmethod
    def from_occupations(cls, params: SystemParams) -> "ThermalEnvironment":
        temps = []
        for j in (1, 2):
            nbar = params.nbar_1 if j == 1 else params.nbar_2
            if nbar == 0.0:
                temps.append(0.0)
            else:
                temps.append(temperature_from_occupation(nbar, params.omega(j)))
        return cls(*temps)

    def temperature(self, j: int) -> float:
        return self.temperature_1 if j == 1 else self.temperature_2

    def omega_coth(self, omega, j: int):
        """omega * coth(omega / (2 T_j)), elementwise and stable.

        Even in omega; omega = 0 returns the classical limit 2 T_j, and a
        zero-temperature bath returns |omega|.
        """
        import numpy as np

        omega = np.asarray(omega, dtype=float)
        T = self.temperature(j)
        if T == 0.0:
            return np.abs(omega)
        safe = np.where(omega == 0.0, 1.0, omega)
        return np.where(omega == 0.0, 2.0 * T, safe / np.tanh(safe / (2.0 * T)))

    def beta_of(self, omega, j: int):
        """Exponent omega / (2 T_j) entering the coth kernels."""
        import numpy as np

        T = self.temperature(j)
        if T == 0.0:
            return np.sign(np.asarray(omega, dtype=float)) * np.inf
        return np.asarray(omega, dtype=float) / (2.0 * T)


def steady_state_means(kappa: float, Delta: float, drive: float,
                       lam: tuple[float, float] = (0.0, 0.0),
                       omega: tuple[float, float] = (1.0, 1.0),
                       mu_tilde: float = 0.0):
    """Classical steady state of the driven system (dimensionless inputs).

    Returns (c_ss, (q_ss_1, q_ss_2)) with c_ss = -i*drive/(kappa + i*Delta)
    and the static mechanical displacements solving the force balance
    omega_j q_j - 2 mu q_{3-j} = lam_j |c_ss|^2.
    """
    if kappa <= 0.0:
        raise ValueError("kappa must be > 0")
    c_ss = -1j * drive / (kappa + 1j * Delta)
    nc = abs(c_ss) ** 2
    w1, w2 = omega
    det = w1 * w2 - 4.0 * mu_tilde ** 2
    if det == 0.0:
        raise ValueError("static force balance is singular (omega_1*omega_2 "
                         "= 4*mu_tilde^2)")
    q1 = (w2 * lam[0] * nc + 2.0 * mu_tilde * lam[1] * nc) / det
    q2 = (w1 * lam[1] * nc + 2.0 * mu_tilde * lam[0] * nc) / det
    return c_ss, (q1, q2)


def normalize(bare: BareParams, *, g_cd_1: float = 0.0, g_cd_2: float = 0.0,
              omega_fb: float = 0.0, vartheta: float = 1.0,
              nbar_1: float = 0.0, nbar_2: float = 0.0,
              cold_damping: bool = True,
              tol: float = 1e-12, max_iter: int = 100) -> SystemParams:
    """Reduce a :class:`BareParams` set to the working dimensionless form.

    The unit is omega_m = sqrt(omega_tilde_1^2 + 2 mu/m_1), the normalized
    mode-1 frequency.  `omega_fb` is the feedback bandwidth in rad/s and is
    normalized alongside the other rates.

    With ``cold_damping=True`` (the measurement-feedback configuration) the
    effective detuning is pinned to Delta = 0 and the self-consistent
    detuning solve is skipped; otherwise Delta = Delta_c - sum_j
    lam_tilde_j <q_j> is found by fixed-point iteration.
    """
    unit = bare.normalized_frequency(1)
    w1 = 1.0
    w2 = bare.normalized_frequency(2) / unit
    lam_t1 = bare.lam_1 / math.sqrt(bare.mass_1 * bare.normalized_frequency(1)) / unit
    lam_t2 = bare.lam_2 / math.sqrt(bare.mass_2 * bare.normalized_frequency(2)) / unit
    mu_t = bare.mu / math.sqrt(bare.mass_1 * bare.mass_2
                               * bare.normalized_frequency(1)
                               * bare.normalized_frequency(2)) / unit
    kappa = bare.kappa / unit
    delta_c = (bare.omega_c - bare.omega_L) / unit
    drive = bare.drive / unit

    if cold_damping:
        delta = 0.0
        c_ss, _ = steady_state_means(kappa, delta, drive, (lam_t1, lam_t2),
                                     (w1, w2), mu_t)
    else:
        delta = delta_c
        for _ in range(max_iter):
            c_ss, (q1, q2) = steady_state_means(kappa, delta, drive,
                                                (lam_t1, lam_t2), (w1, w2), mu_t)
            new = delta_c - lam_t1 * q1 - lam_t2 * q2
            if abs(new - delta) <= tol * max(1.0, abs(new)):
                delta = new
                break
            delta = new
        else:
            raise RuntimeError("self-consistent detuning did not converge "
                               f"within {max_iter} iterations")
        c_ss, _ = steady_state_means(kappa, delta, drive, (lam_t1, lam_t2),
                                     (w1, w2), mu_t)

    # global phase rotated so the cavity amplitude is real and positive
    amp = abs(c_ss)
    G_1 = math.sqrt(2.0) * lam_t1 * amp
    G_2 = math.sqrt(2.0) * lam_t2 * amp

    return SystemParams(
        omega_1=w1, omega_2=w2,
        gamma_1=bare.gamma_1 / unit, gamma_2=bare.gamma_2 / unit,
        kappa=kappa, Delta=delta, G_1=G_1, G_2=G_2,
        g_cd_1=g_cd_1, g_cd_2=g_cd_2,
        omega_fb=omega_fb / unit, vartheta=vartheta,
        mu_tilde=mu_t, nbar_1=nbar_1, nbar_2=nbar_2)
