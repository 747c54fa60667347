"""Render scenario tables to figure files alongside their CSV output."""
from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import LogNorm  # noqa: E402

__all__ = ["render_table"]

_BLUE, _RED = "#1f5fa8", "#c23b22"


def _col(table, name):
    return np.asarray(table.column(name), dtype=float)


def _panel_rows(table, panel):
    idx = table.columns.index("panel")
    rows = [r for r in table.rows if r[idx] == panel]
    sub = type(table)(columns=table.columns, rows=rows, meta=table.meta)
    return sub


def _plot_fig1b(table, ax_pair):
    w = _col(table, "omega")
    pos = w > 0
    for ax, j in zip(ax_pair, (1, 2)):
        ax.semilogy(w[pos], _col(table, f"gamma_eff_{j}_mu0")[pos],
                    color=_BLUE, label="spring off")
        ax.semilogy(w[pos], _col(table, f"gamma_eff_{j}_amc")[pos],
                    color=_RED, ls="--", label="spring on")
        ax.set_xlabel(r"$\omega/\omega_m$")
        ax.set_ylabel(rf"$\Gamma_{{{j},\mathrm{{eff}}}}/\omega_m$")
        ax.set_xlim(0.8, 1.2)
        ax.legend(frameon=False)


def _plot_fig1c(table, ax):
    mu = _col(table, "mu_tilde")
    ax.semilogy(mu, np.abs(_col(table, "gamma_c_1_over_gamma")),
                color=_BLUE, label="mode 1")
    ax.semilogy(mu, np.abs(_col(table, "gamma_c_2_over_gamma")),
                color=_RED, ls="--", label="mode 2")
    ax.set_xlabel(r"$\tilde\mu/\omega_m$")
    ax.set_ylabel(r"$\gamma_{j,\mathrm{C}}/\gamma_j$")
    ax.legend(frameon=False)


def _plot_map(table, fig, axes):
    x = _col(table, "G2_over_G1")
    y = _col(table, "gcd2_over_gcd1")
    xs, ys = np.unique(x), np.unique(y)
    for ax, col in zip(axes, ("n_f_1", "n_f_2")):
        z = _col(table, col).reshape(xs.size, ys.size).T
        z = np.clip(z, 1e-2, None)
        pcm = ax.pcolormesh(xs, ys, z, norm=LogNorm(), shading="nearest",
                            cmap="viridis")
        ax.set_xlabel(r"$G_2/G_1$")
        ax.set_ylabel(r"$g_{\mathrm{cd}2}/g_{\mathrm{cd}1}$")
        ax.set_title(col)
        fig.colorbar(pcm, ax=ax)


def _plot_panels(table, fig):
    idx = table.columns.index("panel")
    panels = sorted({r[idx] for r in table.rows})
    axis_col = table.columns[idx + 1]
    axes = fig.subplots(1, len(panels), squeeze=False)[0]
    for ax, panel in zip(axes, panels):
        sub = _panel_rows(table, panel)
        x = _col(sub, axis_col)
        ax.semilogy(x, _col(sub, "n_f_1"), color=_BLUE, label=r"$n_1^f$")
        ax.semilogy(x, _col(sub, "n_f_2"), color=_RED, ls="--",
                    label=r"$n_2^f$")
        ax.axhline(1.0, color="0.6", lw=0.8)
        ax.set_xlabel(axis_col)
        ax.set_ylabel(r"$n_j^f$")
        ax.set_title(f"panel {panel}")
        ax.legend(frameon=False)


def _plot_fig5(table, fig):
    idx = table.columns.index("panel")
    panels = sorted({r[idx] for r in table.rows})
    axes = fig.subplots(1, len(panels), squeeze=False)[0]
    for ax, panel in zip(axes, panels):
        sub = _panel_rows(table, panel)
        r = _col(sub, "omega_2_over_omega_1")
        ax.semilogy(r, _col(sub, "n_f_1_mu0"), color=_BLUE,
                    label=r"$n_1^f$, spring off")
        ax.semilogy(r, _col(sub, "n_f_2_mu0"), color=_RED,
                    label=r"$n_2^f$, spring off")
        ax.semilogy(r, _col(sub, "n_f_1_amc"), color=_BLUE, ls="--",
                    label=r"$n_1^f$, spring on")
        ax.semilogy(r, _col(sub, "n_f_2_amc"), color=_RED, ls="--",
                    label=r"$n_2^f$, spring on")
        ax.axhline(1.0, color="0.6", lw=0.8)
        ax.set_xlabel(r"$\omega_2/\omega_1$")
        ax.set_ylabel(r"$n_j^f$")
        ax.set_title(f"panel {panel}")
        ax.legend(frameon=False, fontsize=7)


def _plot_barevssq(table, ax):
    mu = _col(table, "mu_tilde")
    ax.plot(mu, _col(table, "n_f_1"), color=_BLUE, label=r"$n_1^f$ normalized")
    ax.plot(mu, _col(table, "n_f_bare_1"), color=_BLUE, ls="--",
            label=r"$n_1^f$ bare")
    ax.plot(mu, _col(table, "n_f_2"), color=_RED, label=r"$n_2^f$ normalized")
    ax.plot(mu, _col(table, "n_f_bare_2"), color=_RED, ls="--",
            label=r"$n_2^f$ bare")
    ax.set_xlabel(r"$\tilde\mu/\omega_m$")
    ax.set_ylabel(r"$n_j^f$")
    ax.set_yscale("log")
    ax.legend(frameon=False, fontsize=8)


def _plot_generic_sweep(table, ax):
    axis_col = table.columns[0]
    x = _col(table, axis_col)
    for col, color, ls in (("n_f_1", _BLUE, "-"), ("n_f_2", _RED, "--")):
        if col in table.columns:
            ax.semilogy(x, _col(table, col), color=color, ls=ls, label=col)
    ax.set_xlabel(axis_col)
    ax.set_ylabel(r"$n_j^f$")
    ax.legend(frameon=False)


def render_table(table, path) -> None:
    """Write a PNG rendering of a scenario/sweep table."""
    kind = table.meta.get("kind", "sweep")
    scenario = table.meta.get("scenario", "")
    if scenario == "fig1b":
        fig, axes = plt.subplots(1, 2, figsize=(8.0, 3.2))
        _plot_fig1b(table, axes)
    elif scenario == "fig1c":
        fig, ax = plt.subplots(figsize=(4.2, 3.2))
        _plot_fig1c(table, ax)
    elif kind == "map":
        fig, axes = plt.subplots(1, 2, figsize=(8.6, 3.4))
        _plot_map(table, fig, axes)
    elif scenario == "fig5":
        fig = plt.figure(figsize=(8.0, 3.4))
        _plot_fig5(table, fig)
    elif kind == "panel_sweep":
        fig = plt.figure(figsize=(8.0, 3.4))
        _plot_panels(table, fig)
    elif scenario == "barevssq":
        fig, ax = plt.subplots(figsize=(4.6, 3.4))
        _plot_barevssq(table, ax)
    else:
        fig, ax = plt.subplots(figsize=(4.6, 3.4))
        _plot_generic_sweep(table, ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
