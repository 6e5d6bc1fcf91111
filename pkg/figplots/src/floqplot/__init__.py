"""Render and sanity-check floqhop simulation output.

This package reads only the public file contract of the simulator — the
seven-column CSV time series and the per-figure ``manifest.json`` — so it
has no import-level coupling to the simulation code.
"""

from .csvio import Curve, SchemaError, read_curve
from .spec import CurveSpec, PanelSpec, PlotSpec, SpecError, load_spec, preset_specs
from .render import plot_compare
from .checks import CheckResult, run_checks

__all__ = [
    "Curve",
    "SchemaError",
    "read_curve",
    "CurveSpec",
    "PanelSpec",
    "PlotSpec",
    "SpecError",
    "load_spec",
    "preset_specs",
    "plot_compare",
    "CheckResult",
    "run_checks",
]
