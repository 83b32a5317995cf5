"""Deterministic figure rendering from parsed tables.

Everything is validated before the first byte of output exists, so a
bad spec or CSV never leaves a file behind.  The rc settings pin the
SVG id hash salt and keep text as text, which makes reruns byte-stable
and the output greppable; no timestamps are embedded.
"""

import os

import matplotlib
import numpy as np
from matplotlib.figure import Figure
from matplotlib.transforms import blended_transform_factory

from .csvio import Table, TableError, column, read_table
from .spec import FigureSpec, SpecError

_RC = {
    "svg.hashsalt": "figscripts",
    "svg.fonttype": "none",
    "font.family": "DejaVu Sans",
    "font.size": 10.0,
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "axes.grid": False,
}


class FigureError(ValueError):
    """Raised when a figure cannot be rendered."""


def _load_tables(spec: FigureSpec):
    tables = [read_table(p) for p in spec.inputs]
    for tab in tables:
        if len(tab) == 0:
            raise FigureError("%s: no data rows, nothing to draw" % tab.path)
    inset = None
    if spec.inset is not None:
        inset = read_table(spec.inset.path)
        if len(inset) == 0:
            raise FigureError("%s: no data rows, nothing to draw" % inset.path)
    return tables, inset


def _curve(tab: Table, name: str, logy: bool):
    t = column(tab, "t")
    v = column(tab, name)
    keep = np.isfinite(t) & np.isfinite(v)
    if logy:
        keep &= v > 0
    if not np.any(keep):
        raise FigureError(
            "%s: column %r has no plottable samples%s"
            % (tab.path, name, " on a log scale" if logy else "")
        )
    return t[keep], v[keep]


def _label(spec: FigureSpec, i: int, tab: Table) -> str:
    if spec.labels:
        return spec.labels[i]
    params = tab.config.get("params")
    if isinstance(params, dict) and params:
        return ", ".join("%s=%g" % (k, v) for k, v in params.items())
    return os.path.basename(tab.path)


def _crossing_times(tables):
    seen = []
    for tab in tables:
        block = tab.analysis.get("crossing")
        if not isinstance(block, dict) or not block.get("crossed"):
            continue
        t_m = block.get("t_m")
        if t_m is None:
            continue
        t_m = float(t_m)
        if not any(abs(t_m - s) < 1e-12 for s in seen):
            seen.append(t_m)
    return seen


def _draw_guides(ax, spec, curves):
    for guide in spec.guides:
        t, v = curves[guide.curve]
        t_a, v_a = t[-1], v[-1]
        seg = t[t >= t_a - 0.6 * (t_a - t[0])]
        ax.plot(
            seg,
            v_a * np.exp(-guide.rate * (seg - t_a)),
            ls="--",
            lw=1.0,
            color="0.4",
            label=guide.label or "exp(-%g t)" % guide.rate,
        )


def _timeseries_figure(spec: FigureSpec, tables, inset_table):
    fig = Figure(figsize=(6.4, 4.4), layout="tight")
    ax = fig.add_subplot()
    curves = []
    for i, tab in enumerate(tables):
        t, v = _curve(tab, spec.column, spec.logy)
        curves.append((t, v))
        ax.plot(t, v, lw=1.6, label=_label(spec, i, tab))
    if spec.logy:
        ax.set_yscale("log")
    # freeze the scale on the data before guide lines extend past it
    ax.autoscale_view()
    ylim = ax.get_ylim()
    _draw_guides(ax, spec, curves)
    ax.set_ylim(ylim)
    mark = blended_transform_factory(ax.transData, ax.transAxes)
    for t_m in _crossing_times(tables):
        ax.axvline(t_m, color="0.3", ls=":", lw=1.2)
        ax.text(t_m, 0.97, " t_M = %.3g" % t_m, transform=mark,
                ha="left", va="top", fontsize=9, color="0.25")
    ax.set_xlabel("t")
    ax.set_ylabel(spec.column)
    if spec.title:
        ax.set_title(spec.title)
    if len(tables) > 1 or spec.guides:
        ax.legend(loc="best", frameon=False, fontsize=9)
    if inset_table is not None:
        ins = ax.inset_axes([0.60, 0.56, 0.36, 0.38])
        ki, vi = _curve(inset_table, spec.inset.column, logy=False)
        ins.plot(ki, vi, lw=1.2, color="C3")
        ins.set_xlabel("k", fontsize=8)
        if spec.inset.label:
            ins.set_ylabel(spec.inset.label, fontsize=8)
        ins.tick_params(labelsize=7)
    return fig


def _panel_figure(spec: FigureSpec, tables):
    rows, cols = spec.layout
    fig = Figure(figsize=(3.4 * cols, 2.8 * rows), layout="tight")
    axes = fig.subplots(rows, cols, squeeze=False)
    for i, tab in enumerate(tables):
        ax = axes[i // cols][i % cols]
        t, v = _curve(tab, spec.column, spec.logy)
        ax.plot(t, v, lw=1.4)
        if spec.logy:
            ax.set_yscale("log")
        ax.set_title(_label(spec, i, tab), fontsize=10)
        if i // cols == rows - 1:
            ax.set_xlabel("t")
        if i % cols == 0:
            ax.set_ylabel(spec.column)
    for j in range(len(tables), rows * cols):
        axes[j // cols][j % cols].set_visible(False)
    if spec.title:
        fig.suptitle(spec.title)
    return fig


def render(spec: FigureSpec, outdir) -> list:
    """Render one figure spec into <outdir>/<name>.svg and .png."""
    tables, inset_table = _load_tables(spec)
    with matplotlib.rc_context(_RC):
        if spec.kind == "timeseries":
            fig = _timeseries_figure(spec, tables, inset_table)
        else:
            fig = _panel_figure(spec, tables)
        os.makedirs(outdir, exist_ok=True)
        svg_path = os.path.join(outdir, spec.name + ".svg")
        png_path = os.path.join(outdir, spec.name + ".png")
        fig.savefig(svg_path, format="svg", metadata={"Date": None})
        fig.savefig(png_path, format="png")
    return [svg_path, png_path]
