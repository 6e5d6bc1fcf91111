"""Deterministic figure rendering from plot specs."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvio import Curve, SchemaError, read_curve
from .spec import PlotSpec

# Fixed style so identical inputs give byte-identical output: pinned fonts
# and geometry, a seeded hash salt for SVG element ids, no timestamps.
_RC = {
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "lines.linewidth": 1.3,
    "legend.framealpha": 0.9,
    "svg.hashsalt": "floqplot",
    "figure.autolayout": False,
}

_MAX_PERIOD_MARKS = 8


def _parse_style(style: str) -> dict:
    """'C0:dashed' / 'C0' / ':dashed' / '' -> matplotlib kwargs."""
    kwargs: dict = {}
    if not style:
        return kwargs
    color, _, linestyle = style.partition(":")
    if color:
        kwargs["color"] = color
    if linestyle:
        kwargs["linestyle"] = linestyle
    return kwargs


def _load_curves(spec: PlotSpec) -> dict[str, Curve]:
    """Read every referenced CSV once, collecting schema errors per file."""
    curves: dict[str, Curve] = {}
    problems: list[str] = []
    for panel in spec.panels:
        for cs in panel.curves:
            if cs.csv in curves or any(p.startswith(cs.csv + ":") for p in problems):
                continue
            try:
                curves[cs.csv] = read_curve(cs.csv)
            except SchemaError as exc:
                problems.extend(exc.messages)
    if problems:
        raise SchemaError(problems)
    return curves


def plot_compare(spec: PlotSpec) -> tuple[list[str], list[str]]:
    """Render one spec to PNG + SVG.

    Returns (written file paths, warnings). Empty curves draw empty axes
    and produce a warning instead of an error. Curves whose time grids
    differ from the panel's first curve are flagged in the legend.
    """
    curves = _load_curves(spec)
    warnings: list[str] = []
    for path, curve in curves.items():
        if len(curve) == 0:
            warnings.append(f"{path}: empty series, drawing empty axes")

    with plt.rc_context(_RC):
        n = len(spec.panels)
        fig, axes = plt.subplots(n, 1, sharex=True, figsize=(6.4, 2.6 * n), squeeze=False)
        axes = axes[:, 0]
        for ax, panel in zip(axes, spec.panels):
            ref_t = None
            mixed_grids = False
            drew_any = False
            for cs in panel.curves:
                curve = curves[cs.csv]
                if len(curve) == 0:
                    continue
                if ref_t is None:
                    ref_t = curve.t
                same_grid = len(curve.t) == len(ref_t) and np.allclose(curve.t, ref_t, atol=1e-9)
                label = cs.label if same_grid else cs.label + " †"
                mixed_grids = mixed_grids or not same_grid
                values, errors = curve.column(panel.column)
                drew_any = True
                line = ax.plot(curve.t, values, label=label, **_parse_style(cs.style))[0]
                if np.any(errors > 0):
                    ax.fill_between(
                        curve.t, values - errors, values + errors,
                        color=line.get_color(), alpha=0.2, linewidth=0,
                    )
            ax.set_ylabel(panel.ylabel)
            if spec.drive_period and ref_t is not None and len(ref_t):
                t_end = float(ref_t[-1])
                marks = [t_end - k * spec.drive_period for k in range(1, _MAX_PERIOD_MARKS + 1)]
                marks = [m for m in marks if m > float(ref_t[0])]
                for k, m in enumerate(marks):
                    ax.axvline(
                        m, color="0.5", linestyle=":", linewidth=0.8,
                        label="drive period" if k == 0 and ax is axes[0] else None,
                    )
            if drew_any:
                ax.legend(loc="best", fontsize=8)
            if mixed_grids:
                ax.annotate(
                    "† different sampling grid", xy=(0.99, 0.02),
                    xycoords="axes fraction", ha="right", fontsize=7, color="0.4",
                )
        axes[-1].set_xlabel("time")
        if spec.title:
            fig.suptitle(spec.title, fontsize=10)
        fig.tight_layout(rect=(0, 0, 1, 0.96) if spec.title else None)

        os.makedirs(os.path.dirname(os.path.abspath(spec.output)), exist_ok=True)
        written = []
        for ext, metadata in (("png", {"Software": "floqplot"}), ("svg", {"Date": None})):
            out = f"{spec.output}.{ext}"
            fig.savefig(out, metadata=metadata)
            written.append(out)
        plt.close(fig)
    return written, warnings
