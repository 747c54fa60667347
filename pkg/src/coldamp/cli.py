"""Command-line interface.

    cool spectrum    [--config C] [--out F] [--path P] [--format csv|json] ...
    cool occupation  [--config C] [--out F] [--path P] [--tol R] [--bare]
    cool sweep       --config C   [--out F] [--threads N] [--format csv|json]
    cool figure NAME [--out DIR] [--points N] [--no-plot] [--threads N]
    cool validate    [--sets N] [--freqs N] [--seed S] [--tol R]

Exit codes: 0 success, 2 validation failure, 1 error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import spectrum
from .config import ConfigError, SweepSpec, load_config
from .cooling import bare_quadrature_occupation, integrate_occupation
from .model import SystemParams
from .oracle import oracle_spectrum
from .sweeps import (FIGURE_DEFAULTS, ResultTable, run_scenario, run_sweep,
                     scenario_names, validate)

__all__ = ["main", "entry"]


def _add_common(p):
    p.add_argument("--config", metavar="PATH", help="configuration file")
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.add_argument("--path", choices=("analytic", "oracle", "both"),
                   default="analytic", help="computation route")
    p.add_argument("--tol", type=float, default=None,
                   help="relative integration tolerance")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=1)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems are user errors (exit 1), not validation failures
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def _build_parser():
    ap = _Parser(
        prog="cool",
        description="Steady-state cooling of two feedback-damped mechanical "
                    "modes with an auxiliary mechanical coupling.")
    ap.add_argument("--version", action="version", version=f"cool {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="per-frequency spectra and rates")
    _add_common(sp)
    sp.add_argument("--omega-min", type=float, default=0.0)
    sp.add_argument("--omega-max", type=float, default=None)
    sp.add_argument("--points", type=int, default=2001)

    oc = sub.add_parser("occupation", help="steady-state phonon numbers")
    _add_common(oc)
    oc.add_argument("--bare", action="store_true",
                    help="include bare-quadrature phonon numbers")

    sw = sub.add_parser("sweep", help="parameter sweep from the config file")
    _add_common(sw)

    fg = sub.add_parser("figure", help="reproduce a published panel set")
    fg.add_argument("name", choices=scenario_names())
    _add_common(fg)
    fg.add_argument("--points", type=int, default=None)
    fg.add_argument("--no-plot", action="store_true",
                    help="emit the data table only")

    va = sub.add_parser("validate", help="dual-route equivalence suite")
    va.add_argument("--sets", type=int, default=64)
    va.add_argument("--freqs", type=int, default=200)
    va.add_argument("--seed", type=int, default=20240501)
    va.add_argument("--tol", type=float, default=1e-6)
    return ap


def _load(args) -> tuple[SystemParams, SweepSpec | None]:
    if getattr(args, "config", None):
        return load_config(args.config)
    return FIGURE_DEFAULTS.replace(mu_tilde=0.02), None


def _emit(table: ResultTable, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            (table.to_json if args.format == "json" else table.to_csv)(fh)
    else:
        (table.to_json if args.format == "json" else table.to_csv)(sys.stdout)


def _cmd_spectrum(args) -> int:
    params, _ = _load(args)
    top = args.omega_max
    if top is None:
        top = 2.0 * max(params.omega_1, params.omega_2, params.kappa,
                        params.omega_fb)
    w = np.linspace(args.omega_min, top, args.points)
    cols = ["omega"]
    data = [w]
    if args.path in ("analytic", "both"):
        dec = spectrum(params, w)
        for j in (1, 2):
            i = j - 1
            cols += [f"s_q_{j}", f"s_th_{j}", f"s_me_{j}", f"s_fb_{j}",
                     f"s_rp_{j}", f"gamma_eff_{j}", f"omega_eff_{j}"]
            data += [dec.s_q[i], dec.s_th[i], dec.s_me[i], dec.s_fb[i],
                     dec.s_rp[i], dec.gamma_eff[i], dec.omega_eff[i]]
    if args.path in ("oracle", "both"):
        osp = oracle_spectrum(params, w)
        for j in (1, 2):
            cols += [f"s_q_{j}_oracle", f"s_p_{j}_oracle"]
            data += [osp.s_q[j - 1], osp.s_p[j - 1]]
    rows = [tuple(col[i] for col in data) for i in range(w.size)]
    meta = {"kind": "spectrum", "path": args.path,
            "params": {k: getattr(params, k)
                       for k in SystemParams.__dataclass_fields__}}
    _emit(ResultTable(columns=tuple(cols), rows=rows, meta=meta), args)
    return 0


def _cmd_occupation(args) -> int:
    params, spec = _load(args)
    rtol = args.tol if args.tol else (spec.rtol if spec else 1e-8)
    paths = ("analytic", "oracle") if args.path == "both" else (args.path,)
    cols, row = [], []
    meta = {"kind": "occupation",
            "params": {k: getattr(params, k)
                       for k in SystemParams.__dataclass_fields__}}
    for path in paths:
        rep = integrate_occupation(params, path, rtol=rtol)
        if args.bare:
            rep = bare_quadrature_occupation(rep, params)
        tag = "" if len(paths) == 1 else f"_{path}"
        for j in (1, 2):
            i = j - 1
            cols += [f"n_f_{j}{tag}", f"var_q_{j}{tag}", f"var_p_{j}{tag}"]
            row += [rep.n_f[i], rep.var_q[i], rep.var_p[i]]
            if args.bare:
                cols += [f"n_f_bare_{j}{tag}"]
                row += [rep.n_f_bare[i]]
        cols += [f"stable{tag}", f"tail_estimate{tag}", f"evaluations{tag}"]
        row += [rep.stable, rep.tail_estimate, rep.evaluations]
        if rep.warnings:
            meta[f"warnings{tag}"] = "; ".join(rep.warnings)
    _emit(ResultTable(columns=tuple(cols), rows=[tuple(row)], meta=meta), args)
    return 0


def _cmd_sweep(args) -> int:
    params, spec = _load(args)
    if spec is None or (not spec.axes and spec.scenario is None):
        raise ConfigError("sweep requires a [sweep] section in the config")
    if spec.scenario is not None:
        table = run_scenario(spec.scenario, threads=args.threads,
                             path=spec.path)
    else:
        if args.path != "analytic":
            spec = SweepSpec(axes=spec.axes, scenario=None, path=args.path,
                             rtol=spec.rtol, tail_rtol=spec.tail_rtol,
                             overrides=spec.overrides)
        if args.tol:
            spec = SweepSpec(axes=spec.axes, scenario=None, path=spec.path,
                             rtol=args.tol, tail_rtol=spec.tail_rtol,
                             overrides=spec.overrides)
        table = run_sweep(params, spec, threads=args.threads)
    _emit(table, args)
    return 0


def _cmd_figure(args) -> int:
    table = run_scenario(args.name, points=args.points, threads=args.threads,
                         path=args.path)
    outdir = Path(args.out) if args.out else Path.cwd() / "figures"
    outdir.mkdir(parents=True, exist_ok=True)
    ext = "json" if args.format == "json" else "csv"
    data_path = outdir / f"{args.name}.{ext}"
    with open(data_path, "w", encoding="utf-8") as fh:
        (table.to_json if args.format == "json" else table.to_csv)(fh)
    print(f"wrote {data_path}")
    if not args.no_plot:
        from .plots import render_table

        png_path = outdir / f"{args.name}.png"
        render_table(table, png_path)
        print(f"wrote {png_path}")
    return 0


def _cmd_validate(args) -> int:
    report = validate(sets=args.sets, freqs=args.freqs, seed=args.seed,
                      tol=args.tol)
    print(report)
    return 0 if report.passed else 2


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    handlers = {"spectrum": _cmd_spectrum, "occupation": _cmd_occupation,
                "sweep": _cmd_sweep, "figure": _cmd_figure,
                "validate": _cmd_validate}
    try:
        return handlers[args.command](args)
    except (ConfigError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())
