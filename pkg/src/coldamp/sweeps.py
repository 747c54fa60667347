"""Parameter-sweep orchestration, figure scenarios and the validation suite.

Every sweep emits a :class:`ResultTable`: deterministic axis-major rows, a
``#``-prefixed header block carrying the fully resolved parameter set and
package version, and CSV/JSON writers.  Scenario tables reproduce the
published panels as data; per-point failures are recorded per row and
never abort a sweep.
"""
from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analytic import effective_damping, net_cooling_rate, position_spectrum
from .config import SweepAxis, SweepSpec
from .cooling import bare_quadrature_occupation, integrate_occupation
from .model import SystemParams
from .modes import dark_mode_residual
from .oracle import oracle_position_spectrum, stability_check

__all__ = ["ResultTable", "run_sweep", "run_scenario", "scenario_names",
           "validate", "ValidationReport", "random_stable_params"]

# caption defaults of the headline figure set; scenarios override per panel
FIGURE_DEFAULTS = SystemParams(
    omega_1=1.0, omega_2=1.0, gamma_1=1e-6, gamma_2=1e-6, kappa=4.0,
    Delta=0.0, G_1=0.4, G_2=0.28, g_cd_1=1.0, g_cd_2=0.6, omega_fb=3.0,
    vartheta=0.8, mu_tilde=0.0, nbar_1=1e3, nbar_2=1e3)

# SFL > FFL per its defining pair of inequalities (gains and couplings)
SFL_GT_FFL = dict(g_cd_2=1.7, G_2=1.8 * 0.4)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


@dataclass
class ResultTable:
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def header_lines(self):
        yield f"# coldamp {__version__}"
        for key, value in self.meta.items():
            if isinstance(value, dict):
                for k2, v2 in value.items():
                    yield f"# {key}.{k2} = {_fmt(v2)}"
            else:
                yield f"# {key} = {_fmt(value)}"

    def to_csv(self, fh) -> None:
        for line in self.header_lines():
            fh.write(line + "\n")
        fh.write(",".join(self.columns) + "\n")
        for row in self.rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")

    def to_json(self, fh) -> None:
        payload = {
            "version": __version__,
            "meta": {k: v for k, v in self.meta.items()},
            "columns": list(self.columns),
            "rows": [[v if isinstance(v, str) else
                      (int(v) if isinstance(v, (bool, np.bool_, int, np.integer))
                       else float(v)) for v in row] for row in self.rows],
        }
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")

    def column(self, name):
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def _params_meta(params: SystemParams) -> dict:
    return {f.name: getattr(params, f.name)
            for f in dataclasses.fields(SystemParams)}


def _occupation_row(params, path, rtol, tail_rtol):
    """Shared per-point evaluation: occupations plus resonance diagnostics."""
    res = np.array([params.omega_1, params.omega_2])
    rates = net_cooling_rate(params, res)
    gammas = effective_damping(params, res)
    out = {
        "gamma_c_1": rates[0, 0], "gamma_c_2": rates[1, 1],
        "gamma_eff_1": gammas[0, 0], "gamma_eff_2": gammas[1, 1],
        "dark_mode_residual": dark_mode_residual(params),
    }
    paths = ("analytic", "oracle") if path == "both" else (path,)
    reports = {}
    for p in paths:
        reports[p] = integrate_occupation(params, p, rtol=rtol,
                                          tail_rtol=tail_rtol)
    first = reports[paths[0]]
    out["stable"] = first.stable
    out["n_f_1"], out["n_f_2"] = first.n_f
    if path == "both":
        o = reports["oracle"]
        out["n_f_1_oracle"], out["n_f_2_oracle"] = o.n_f
        out["disagreement"] = float(np.max(np.abs(o.n_f - first.n_f)
                                           / np.maximum(np.abs(o.n_f), 1e-30)))
    return out


def run_sweep(base: SystemParams, spec: SweepSpec, threads: int = 1) -> ResultTable:
    """Evaluate a (1- or 2-axis) sweep into a deterministic table."""
    axes = spec.axes
    if not axes:
        raise ValueError("sweep spec has no axes; use run_scenario for "
                         "scenario ids")
    grids = [axis.values() for axis in axes]
    points = []
    if len(grids) == 1:
        points = [(v,) for v in grids[0]]
    else:
        points = [(v1, v2) for v1 in grids[0] for v2 in grids[1]]

    columns = [axis.name for axis in axes] + ["status", "stable",
                                              "n_f_1", "n_f_2"]
    if spec.path == "both":
        columns += ["n_f_1_oracle", "n_f_2_oracle", "disagreement"]
    columns += ["gamma_c_1", "gamma_c_2", "gamma_eff_1", "gamma_eff_2",
                "dark_mode_residual"]

    def evaluate(values):
        try:
            params = base.replace(**{a.name: float(v)
                                     for a, v in zip(axes, values)},
                                  **spec.overrides)
            data = _occupation_row(params, spec.path, spec.rtol, spec.tail_rtol)
            row = list(values) + ["ok", data["stable"], data["n_f_1"],
                                  data["n_f_2"]]
            if spec.path == "both":
                row += [data["n_f_1_oracle"], data["n_f_2_oracle"],
                        data["disagreement"]]
            row += [data["gamma_c_1"], data["gamma_c_2"],
                    data["gamma_eff_1"], data["gamma_eff_2"],
                    data["dark_mode_residual"]]
            return tuple(row)
        except Exception as exc:  # per-row failure is a row, not an abort
            pad = 7 if spec.path != "both" else 10
            return tuple(list(values) + [f"error: {exc}"] + [float("nan")] * pad)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(evaluate, points))
    else:
        rows = [evaluate(v) for v in points]

    meta = {"kind": "sweep", "path": spec.path, "rtol": spec.rtol,
            "tail_rtol": spec.tail_rtol,
            "axes": " x ".join(f"{a.name}[{a.start}..{a.stop};{a.points};{a.scale}]"
                               for a in axes),
            "overrides": dict(spec.overrides), "params": _params_meta(base)}
    return ResultTable(columns=tuple(columns), rows=rows, meta=meta)


# ---------------------------------------------------------------------------
# figure scenarios


def _freq_cluster(center: float, inner: float, outer: float, n: int):
    d = np.geomspace(inner, outer, n)
    return np.concatenate([center - d[::-1], [center], center + d])


def _scenario_fig1b(points, threads, path, rtol, tail_rtol):
    base = FIGURE_DEFAULTS
    w = np.unique(np.concatenate([
        np.linspace(0.8, 1.2, points),
        _freq_cluster(1.0, 1e-7, 2e-2, 160),
    ]))
    w = np.concatenate([-w[::-1], w])
    cols = ["omega"]
    data = [w]
    for tag, mu in (("mu0", 0.0), ("amc", 0.02)):
        params = base.replace(mu_tilde=mu)
        gam = effective_damping(params, w)
        rates = net_cooling_rate(params, w)
        for j in (1, 2):
            cols += [f"gamma_eff_{j}_{tag}", f"gamma_c_{j}_{tag}"]
            data += [gam[j - 1], rates[j - 1]]
    rows = [tuple(col[i] for col in data) for i in range(w.size)]
    meta = {"kind": "profile", "scenario": "fig1b",
            "mu_tilde_cases": "0.0, 0.02", "params": _params_meta(base)}
    return ResultTable(columns=tuple(cols), rows=rows, meta=meta)


def _scenario_fig1c(points, threads, path, rtol, tail_rtol):
    base = FIGURE_DEFAULTS
    mus = np.linspace(0.0, 0.05, points)
    rows = []
    for mu in mus:
        params = base.replace(mu_tilde=float(mu))
        res = np.array([params.omega_1, params.omega_2])
        rates = net_cooling_rate(params, res)
        rows.append((float(mu), rates[0, 0], rates[1, 1],
                     rates[0, 0] / params.gamma_1, rates[1, 1] / params.gamma_2,
                     stability_check(params).stable,
                     dark_mode_residual(params)))
    meta = {"kind": "rate_sweep", "scenario": "fig1c",
            "omega_eval": "omega_m (per mode)", "params": _params_meta(base)}
    return ResultTable(
        columns=("mu_tilde", "gamma_c_1", "gamma_c_2",
                 "gamma_c_1_over_gamma", "gamma_c_2_over_gamma",
                 "stable", "dark_mode_residual"),
        rows=rows, meta=meta)


def _panel_sweep(base, panels, threads, path, rtol, tail_rtol):
    """Stack 1-D sweeps that differ by per-panel overrides."""
    all_rows = []
    columns = None
    for panel, overrides, axis in panels:
        spec = SweepSpec(axes=(axis,), path=path, rtol=rtol,
                         tail_rtol=tail_rtol, overrides=overrides)
        table = run_sweep(base, spec, threads=threads)
        if columns is None:
            columns = ("panel",) + table.columns
        all_rows += [(panel,) + row for row in table.rows]
    return columns, all_rows


def _scenario_fig3ab(points, threads, path, rtol, tail_rtol):
    base = FIGURE_DEFAULTS.replace(mu_tilde=0.02)
    ratios = np.linspace(0.1, 2.0, points)
    rows = []

    def evaluate(pair):
        rg, rgain = pair
        params = base.replace(G_2=float(rg) * base.G_1,
                              g_cd_2=float(rgain) * base.g_cd_1)
        try:
            data = _occupation_row(params, path, rtol, tail_rtol)
            return (float(rg), float(rgain), "ok", data["stable"],
                    data["n_f_1"], data["n_f_2"], data["dark_mode_residual"])
        except Exception as exc:
            return (float(rg), float(rgain), f"error: {exc}", False,
                    float("nan"), float("nan"), float("nan"))

    pairs = [(rg, rgain) for rg in ratios for rgain in ratios]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(evaluate, pairs))
    else:
        rows = [evaluate(p) for p in pairs]
    meta = {"kind": "map", "scenario": "fig3ab", "axis_range": "0.1..2.0",
            "points": points, "params": _params_meta(base)}
    return ResultTable(
        columns=("G2_over_G1", "gcd2_over_gcd1", "status", "stable",
                 "n_f_1", "n_f_2", "dark_mode_residual"),
        rows=rows, meta=meta)


def _scenario_fig3cdef(points, threads, path, rtol, tail_rtol):
    base = FIGURE_DEFAULTS.replace(mu_tilde=0.02)
    g1 = base.G_1
    panels = [
        ("c", {"g_cd_2": 0.6},
         SweepAxis("G_2", 0.1 * g1, 2.0 * g1, points)),
        ("d", {"G_2": 0.7 * g1},
         SweepAxis("g_cd_2", 0.1, 2.0, points)),
        ("e", {"g_cd_2": 1.7},
         SweepAxis("G_2", 0.1 * g1, 2.0 * g1, points)),
        ("f", {"G_2": 1.8 * g1},
         SweepAxis("g_cd_2", 0.1, 2.0, points)),
    ]
    columns, rows = _panel_sweep(base, panels, threads, path, rtol, tail_rtol)
    meta = {"kind": "panel_sweep", "scenario": "fig3cdef",
            "ratio_range": "0.1..2.0", "params": _params_meta(base)}
    return ResultTable(columns=columns, rows=rows, meta=meta)


def _scenario_fig4ab(points, threads, path, rtol, tail_rtol):
    base = FIGURE_DEFAULTS
    panels = [
        ("a", {}, SweepAxis("mu_tilde", 0.0, 0.05, points)),
        ("b", dict(SFL_GT_FFL), SweepAxis("mu_tilde", 0.0, 0.05, points)),
    ]
    columns, rows = _panel_sweep(base, panels, threads, path, rtol, tail_rtol)
    meta = {"kind": "panel_sweep", "scenario": "fig4ab",
            "sfl_gt_ffl": dict(SFL_GT_FFL), "params": _params_meta(base)}
    return ResultTable(columns=columns, rows=rows, meta=meta)


def _scenario_fig4cd(points, threads, path, rtol, tail_rtol):
    base = FIGURE_DEFAULTS.replace(mu_tilde=0.02)
    panels = [
        ("c", {}, SweepAxis("omega_fb", 0.2, 6.0, points)),
        ("d", dict(SFL_GT_FFL), SweepAxis("omega_fb", 0.2, 6.0, points)),
    ]
    columns, rows = _panel_sweep(base, panels, threads, path, rtol, tail_rtol)
    meta = {"kind": "panel_sweep", "scenario": "fig4cd",
            "sfl_gt_ffl": dict(SFL_GT_FFL), "params": _params_meta(base)}
    return ResultTable(columns=columns, rows=rows, meta=meta)


def _scenario_fig4ef(points, threads, path, rtol, tail_rtol):
    base = FIGURE_DEFAULTS.replace(mu_tilde=0.02)
    panels = [
        ("e", {}, SweepAxis("kappa", 0.2, 8.0, points)),
        ("f", dict(SFL_GT_FFL), SweepAxis("kappa", 0.2, 8.0, points)),
    ]
    columns, rows = _panel_sweep(base, panels, threads, path, rtol, tail_rtol)
    meta = {"kind": "panel_sweep", "scenario": "fig4ef",
            "sfl_gt_ffl": dict(SFL_GT_FFL), "params": _params_meta(base)}
    return ResultTable(columns=columns, rows=rows, meta=meta)


def _scenario_fig5(points, threads, path, rtol, tail_rtol):
    base = FIGURE_DEFAULTS
    g1 = base.G_1
    rows = []
    ratios = np.linspace(0.95, 1.05, points)
    for panel, overrides in (("a", {"g_cd_2": 0.5, "G_2": 0.5 * g1}),
                             ("b", {"g_cd_2": 1.9, "G_2": 1.9 * g1})):
        for r in ratios:
            row = [panel, float(r)]
            for mu in (0.0, 0.02):
                params = base.replace(omega_2=float(r), mu_tilde=mu, **overrides)
                try:
                    rep = integrate_occupation(params, "analytic", rtol=rtol,
                                               tail_rtol=tail_rtol)
                    row += [rep.n_f[0], rep.n_f[1], rep.stable]
                except Exception:
                    row += [float("nan"), float("nan"), False]
            row.append(dark_mode_residual(
                base.replace(omega_2=float(r), mu_tilde=0.02, **overrides)))
            rows.append(tuple(row))
    meta = {"kind": "detuning_scan", "scenario": "fig5",
            "panel_a": "g_cd_2=0.5, G_2=0.5*G_1",
            "panel_b": "g_cd_2=1.9, G_2=1.9*G_1",
            "params": _params_meta(base)}
    return ResultTable(
        columns=("panel", "omega_2_over_omega_1",
                 "n_f_1_mu0", "n_f_2_mu0", "stable_mu0",
                 "n_f_1_amc", "n_f_2_amc", "stable_amc",
                 "dark_mode_residual_amc"),
        rows=rows, meta=meta)


def _scenario_barevssq(points, threads, path, rtol, tail_rtol):
    base = FIGURE_DEFAULTS
    rows = []
    for mu in np.linspace(0.0, 0.05, points):
        params = base.replace(mu_tilde=float(mu))
        rep = integrate_occupation(params, "analytic", rtol=rtol,
                                   tail_rtol=tail_rtol)
        rep = bare_quadrature_occupation(rep, params)
        rows.append((float(mu), rep.n_f[0], rep.n_f[1],
                     rep.n_f_bare[0], rep.n_f_bare[1], rep.stable))
    meta = {"kind": "bare_vs_squeezed", "scenario": "barevssq",
            "loop": "SFL<FFL (defaults)", "params": _params_meta(base)}
    return ResultTable(
        columns=("mu_tilde", "n_f_1", "n_f_2", "n_f_bare_1", "n_f_bare_2",
                 "stable"),
        rows=rows, meta=meta)


_SCENARIOS = {
    "fig1b": (_scenario_fig1b, 801),
    "fig1c": (_scenario_fig1c, 101),
    "fig3ab": (_scenario_fig3ab, 41),
    "fig3cdef": (_scenario_fig3cdef, 39),
    "fig4ab": (_scenario_fig4ab, 26),
    "fig4cd": (_scenario_fig4cd, 30),
    "fig4ef": (_scenario_fig4ef, 28),
    "fig5": (_scenario_fig5, 21),
    "barevssq": (_scenario_barevssq, 26),
}


def scenario_names():
    return tuple(sorted(_SCENARIOS))


def run_scenario(name: str, *, points: int | None = None, threads: int = 1,
                 path: str = "analytic", rtol: float = 1e-6,
                 tail_rtol: float = 1e-6) -> ResultTable:
    """Reproduce one published panel set as a data table."""
    if name not in _SCENARIOS:
        raise ValueError(f"unknown scenario {name!r}; choose from "
                         + ", ".join(scenario_names()))
    fn, default_points = _SCENARIOS[name]
    return fn(points or default_points, threads, path, rtol, tail_rtol)


# ---------------------------------------------------------------------------
# validation suite


def random_stable_params(rng: np.random.Generator) -> SystemParams:
    """One random stable parameter set, log-uniform within a decade of the
    headline values (detection efficiency uniform in [0.3, 1])."""
    base = FIGURE_DEFAULTS

    def logu(center):
        return float(center * 10.0 ** rng.uniform(-1.0, 1.0))

    for _ in range(200):
        cand = SystemParams(
            omega_1=1.0, omega_2=logu(1.0),
            gamma_1=logu(1e-6), gamma_2=logu(1e-6),
            kappa=logu(base.kappa), Delta=0.0,
            G_1=logu(base.G_1), G_2=logu(base.G_2),
            g_cd_1=logu(base.g_cd_1), g_cd_2=logu(base.g_cd_2),
            omega_fb=logu(base.omega_fb),
            vartheta=float(rng.uniform(0.3, 1.0)),
            mu_tilde=logu(0.02),
            nbar_1=logu(1e3), nbar_2=logu(1e3))
        if stability_check(cand, diagnostics=False).stable:
            return cand
    raise RuntimeError("no stable random parameter set found")


@dataclass
class ValidationReport:
    checks: list  # (name, passed, worst, detail)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _, _ in self.checks)

    def __str__(self) -> str:
        lines = []
        for name, ok, worst, detail in self.checks:
            status = "PASS" if ok else "FAIL"
            lines.append(f"{status}  {name}  worst={worst:.3e}  {detail}")
        lines.append(("ALL CHECKS PASSED" if self.passed else "FAILURES PRESENT"))
        return "\n".join(lines)


def validate(sets: int = 64, freqs: int = 200, seed: int = 20240501,
             tol: float = 1e-6) -> ValidationReport:
    """Dual-path equivalence plus the cheap exact identities."""
    rng = np.random.default_rng(seed)
    checks = []

    cases = [FIGURE_DEFAULTS.replace(mu_tilde=0.02)]
    cases += [random_stable_params(rng) for _ in range(sets)]
    worst_peak, worst_point = 0.0, 0.0
    for params in cases:
        top = 1.5 * max(params.omega_1, params.omega_2, params.kappa,
                        params.omega_fb)
        w = rng.uniform(0.0, top, freqs)
        s_a = position_spectrum(params, w)
        s_o = oracle_position_spectrum(params, w)
        peak = np.max(np.abs(s_a - s_o)) / np.max(np.abs(s_o))
        point = np.max(np.abs(s_a - s_o) / (np.abs(s_o)
                                            + 1e-12 * np.max(np.abs(s_o))))
        worst_peak = max(worst_peak, float(peak))
        worst_point = max(worst_point, float(point))
    checks.append(("dual-path spectra (peak-normalized)", worst_peak <= tol,
                   worst_peak, f"{len(cases)} sets x {freqs} freqs"))
    checks.append(("dual-path spectra (pointwise)", worst_point <= tol,
                   worst_point, "floor 1e-12 of peak"))

    eq = FIGURE_DEFAULTS.replace(G_1=0.0, G_2=0.0, g_cd_1=0.0, g_cd_2=0.0,
                                 mu_tilde=0.0)
    rep = integrate_occupation(eq, "analytic")
    worst = float(np.max(np.abs(rep.n_f - 1e3) / 1e3))
    checks.append(("equilibrium identity n_f = nbar", worst <= 1e-3, worst,
                   f"n_f = {rep.n_f}"))

    params = FIGURE_DEFAULTS.replace(mu_tilde=0.02)
    w = rng.uniform(0.01, 6.0, 200)
    s_pos = position_spectrum(params, w)
    s_neg = position_spectrum(params, -w)
    worst = float(np.max(np.abs(s_pos - s_neg) / np.abs(s_pos)))
    checks.append(("evenness S(w) = S(-w)", worst <= 1e-10, worst, ""))

    from .analytic import noise_spectra
    s_th, s_me, s_fb, s_rp = noise_spectra(params, w)
    worst = float(min(s_th.min(), s_fb.min(), s_rp.min()))
    checks.append(("channel positivity", worst >= 0.0, worst,
                   "S_th, S_fb, S_rp >= 0"))

    from .modes import amc_diagonalize
    worst = 0.0
    for _ in range(50):
        cand = random_stable_params(rng)
        hyb = amc_diagonalize(cand)
        worst = max(worst, abs(hyb.f ** 2 + hyb.h ** 2 - 1.0))
        worst = max(worst, abs(hyb.g_tilde_plus ** 2 + hyb.g_tilde_minus ** 2
                               - (cand.G_1 ** 2 + cand.G_2 ** 2)))
    checks.append(("mode-transform invariants", worst <= 1e-12, worst,
                   "f^2+h^2 = 1 and coupling norm"))

    from .oracle import oracle_spectrum
    spec = oracle_spectrum(params, w)
    worst = float(np.max(np.abs(spec.s_p * np.array([[params.omega_1 ** 2],
                                                     [params.omega_2 ** 2]])
                                - w * w * spec.s_q)
                         / np.max(spec.s_q)))
    checks.append(("momentum identity w^2 S_q = w_j^2 S_p", worst <= 1e-12,
                   worst, ""))

    import io
    spec1 = SweepSpec(axes=(SweepAxis("mu_tilde", 0.0, 0.02, 3),),
                      rtol=1e-6, tail_rtol=1e-5)
    buf1, buf2 = io.StringIO(), io.StringIO()
    run_sweep(FIGURE_DEFAULTS, spec1).to_csv(buf1)
    run_sweep(FIGURE_DEFAULTS, spec1).to_csv(buf2)
    same = buf1.getvalue() == buf2.getvalue()
    checks.append(("sweep determinism (byte-identical)", same,
                   0.0 if same else 1.0, "3-point sweep run twice"))

    return ValidationReport(checks=checks)
