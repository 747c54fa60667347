"""Structured text configuration (INI sections) for the CLI and sweeps.

Sections and keys (all optional; unknown sections or keys are an error):

    [system]    omega_1 omega_2 gamma_1 gamma_2 kappa Delta G_1 G_2 mu_tilde
                normalize cold_damping
                -- with normalize = true, instead supply the laboratory set:
                omega_c omega_L drive kappa omega_tilde_1 omega_tilde_2
                mass_1 mass_2 lambda_1 lambda_2 gamma_1 gamma_2 mu
    [feedback]  g_cd_1 g_cd_2 omega_fb vartheta
    [bath]      nbar_1 nbar_2
    [sweep]     scenario | parameter start stop points scale
                [parameter_2 start_2 stop_2 points_2 scale_2]
                path rtol tail_rtol

Values are plain floats/ints/booleans.  Unset keys fall back to the
headline defaults of :class:`coldamp.model.SystemParams`.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .model import BareParams, SystemParams, normalize

__all__ = ["ConfigError", "SweepAxis", "SweepSpec", "load_config", "parse_config"]


class ConfigError(ValueError):
    pass


_SYSTEM_NORMALIZED = {"omega_1", "omega_2", "gamma_1", "gamma_2", "kappa",
                      "delta", "g_1", "g_2", "mu_tilde"}
_SYSTEM_BARE = {"omega_c", "omega_l", "drive", "kappa", "omega_tilde_1",
                "omega_tilde_2", "mass_1", "mass_2", "lambda_1", "lambda_2",
                "gamma_1", "gamma_2", "mu"}
_SYSTEM_FLAGS = {"normalize", "cold_damping"}
_FEEDBACK = {"g_cd_1", "g_cd_2", "omega_fb", "vartheta"}
_BATH = {"nbar_1", "nbar_2"}
_SWEEP = {"scenario", "parameter", "start", "stop", "points", "scale",
          "parameter_2", "start_2", "stop_2", "points_2", "scale_2",
          "path", "rtol", "tail_rtol"}

_PARAM_KEY_MAP = {"delta": "Delta", "g_1": "G_1", "g_2": "G_2"}


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in SystemParams.__dataclass_fields__:
            raise ConfigError(f"sweep parameter {self.name!r} does not resolve "
                              "to a system parameter")
        if self.points < 1:
            raise ConfigError("sweep needs at least one point")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"unknown sweep scale {self.scale!r}")
        if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
            raise ConfigError("log-scaled sweeps need positive endpoints")

    def values(self):
        import numpy as np

        if self.points == 1:
            return np.array([self.start], dtype=float)
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[SweepAxis, ...] = ()
    scenario: str | None = None
    path: str = "analytic"
    rtol: float = 1e-8
    tail_rtol: float = 1e-6
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.path not in ("analytic", "oracle", "both"):
            raise ConfigError(f"unknown path {self.path!r}")
        if self.scenario is None and not self.axes:
            raise ConfigError("sweep needs either a scenario or an axis")


def _check_keys(parser: configparser.ConfigParser):
    known = {"system": _SYSTEM_NORMALIZED | _SYSTEM_BARE | _SYSTEM_FLAGS,
             "feedback": _FEEDBACK, "bath": _BATH, "sweep": _SWEEP}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in known[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]")


def parse_config(text: str) -> tuple[SystemParams, SweepSpec | None]:
    """Parse configuration text into parameters and an optional sweep."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed configuration: {exc}") from exc
    _check_keys(parser)

    def getf(section, key, default=None):
        if parser.has_option(section, key):
            try:
                return parser.getfloat(section, key)
            except ValueError as exc:
                raise ConfigError(f"{section}.{key} is not a number") from exc
        return default

    sys_sec = parser["system"] if parser.has_section("system") else {}
    feedback = {k: getf("feedback", k) for k in _FEEDBACK
                if parser.has_option("feedback", k)}
    bath = {k: getf("bath", k) for k in _BATH if parser.has_option("bath", k)}

    bare_mode = parser.getboolean("system", "normalize", fallback=False) \
        if parser.has_section("system") else False
    if bare_mode:
        missing = sorted(k for k in _SYSTEM_BARE if k not in sys_sec)
        if missing:
            raise ConfigError("bare mode needs keys: " + ", ".join(missing))
        for k in sys_sec:
            if k in _SYSTEM_NORMALIZED - _SYSTEM_BARE:
                raise ConfigError(f"key {k!r} is not part of the bare set")
        bare = BareParams(
            omega_c=getf("system", "omega_c"), omega_L=getf("system", "omega_l"),
            drive=getf("system", "drive"), kappa=getf("system", "kappa"),
            omega_tilde_1=getf("system", "omega_tilde_1"),
            omega_tilde_2=getf("system", "omega_tilde_2"),
            mass_1=getf("system", "mass_1"), mass_2=getf("system", "mass_2"),
            lam_1=getf("system", "lambda_1"), lam_2=getf("system", "lambda_2"),
            gamma_1=getf("system", "gamma_1"), gamma_2=getf("system", "gamma_2"),
            mu=getf("system", "mu", 0.0))
        params = normalize(
            bare,
            g_cd_1=feedback.get("g_cd_1", 0.0), g_cd_2=feedback.get("g_cd_2", 0.0),
            omega_fb=feedback.get("omega_fb", 0.0),
            vartheta=feedback.get("vartheta", 1.0),
            nbar_1=bath.get("nbar_1", 0.0), nbar_2=bath.get("nbar_2", 0.0),
            cold_damping=parser.getboolean("system", "cold_damping", fallback=True))
    else:
        kw = {}
        for key in _SYSTEM_NORMALIZED:
            if parser.has_option("system", key):
                kw[_PARAM_KEY_MAP.get(key, key)] = getf("system", key)
        for key, val in feedback.items():
            kw[key] = val
        for key, val in bath.items():
            kw[key] = val
        try:
            params = SystemParams(**kw)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    spec = None
    if parser.has_section("sweep"):
        sec = parser["sweep"]
        axes = []
        for suffix in ("", "_2"):
            if parser.has_option("sweep", "parameter" + suffix):
                axes.append(SweepAxis(
                    name=sec.get("parameter" + suffix),
                    start=getf("sweep", "start" + suffix),
                    stop=getf("sweep", "stop" + suffix),
                    points=int(getf("sweep", "points" + suffix, 26)),
                    scale=sec.get("scale" + suffix, "linear")))
        spec = SweepSpec(
            axes=tuple(axes), scenario=sec.get("scenario", None),
            path=sec.get("path", "analytic"),
            rtol=getf("sweep", "rtol", 1e-8),
            tail_rtol=getf("sweep", "tail_rtol", 1e-6))
    return params, spec


def load_config(path) -> tuple[SystemParams, SweepSpec | None]:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
