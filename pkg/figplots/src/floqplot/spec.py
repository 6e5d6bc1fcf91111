"""Plot specifications: explicit JSON files or manifest-derived presets."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field


class SpecError(ValueError):
    """Invalid plot specification; ``messages`` lists every problem."""

    def __init__(self, messages: list[str]):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


@dataclass(frozen=True)
class CurveSpec:
    csv: str
    label: str
    style: str = ""          # "<color>:<linestyle>", either half optional


@dataclass(frozen=True)
class PanelSpec:
    column: str              # "pop" or "ekin"
    ylabel: str
    curves: tuple[CurveSpec, ...]


@dataclass(frozen=True)
class PlotSpec:
    output: str              # path stem; .png/.svg are appended
    panels: tuple[PanelSpec, ...]
    title: str = ""
    drive_period: float | None = None


_COLUMNS = ("pop", "ekin")

# one fixed style per method so every figure reads the same way
METHOD_STYLES = {
    "FQME": "C0:solid",
    "FaQME": "C1:dashed",
    "FSH": "C2:solid",
    "FaSH": "C3:dashed",
    "FaSH-density": "C4:dashdot",
}
_YLABELS = {"pop": "impurity population", "ekin": "nuclear kinetic energy"}


def load_spec(path: str) -> PlotSpec:
    """Parse a JSON plot spec, collecting all validation problems."""
    problems: list[str] = []
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise SpecError([f"{path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise SpecError([f"{path}: invalid JSON: {exc}"]) from exc

    if not isinstance(raw, dict):
        raise SpecError([f"{path}: top level must be an object"])
    output = raw.get("output")
    if not isinstance(output, str) or not output:
        problems.append("output: required non-empty string (image path stem)")
    title = raw.get("title", "")
    period = raw.get("drive_period")
    if period is not None and not (isinstance(period, (int, float)) and period > 0):
        problems.append(f"drive_period: must be a positive number, got {period!r}")

    panels = []
    raw_panels = raw.get("panels")
    if not isinstance(raw_panels, list) or not raw_panels:
        problems.append("panels: required non-empty list")
        raw_panels = []
    base = os.path.dirname(os.path.abspath(path))
    for i, rp in enumerate(raw_panels):
        where = f"panels[{i}]"
        if not isinstance(rp, dict):
            problems.append(f"{where}: must be an object")
            continue
        column = rp.get("column")
        if column not in _COLUMNS:
            problems.append(f"{where}.column: must be one of {_COLUMNS}, got {column!r}")
            column = "pop"
        curves = []
        raw_curves = rp.get("curves")
        if not isinstance(raw_curves, list) or not raw_curves:
            problems.append(f"{where}.curves: required non-empty list")
            raw_curves = []
        for j, rc in enumerate(raw_curves):
            if not isinstance(rc, dict) or not isinstance(rc.get("csv"), str):
                problems.append(f"{where}.curves[{j}]: needs a 'csv' path")
                continue
            csv = rc["csv"]
            if not os.path.isabs(csv):
                csv = os.path.join(base, csv)
            curves.append(
                CurveSpec(
                    csv=csv,
                    label=str(rc.get("label", os.path.basename(rc["csv"]))),
                    style=str(rc.get("style", "")),
                )
            )
        panels.append(PanelSpec(column=column, ylabel=str(rp.get("ylabel", _YLABELS[column])), curves=tuple(curves)))

    if problems:
        raise SpecError([f"{path}: {p}" for p in problems])
    out = output if os.path.isabs(output) else os.path.join(base, output)
    return PlotSpec(output=out, panels=tuple(panels), title=str(title), drive_period=period)


def read_manifest(preset: str, root: str) -> dict:
    path = os.path.join(root, preset, "manifest.json")
    try:
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise SpecError([f"{path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise SpecError([f"{path}: invalid JSON: {exc}"]) from exc
    if not isinstance(manifest.get("runs"), list) or not manifest["runs"]:
        raise SpecError([f"{path}: manifest has no runs"])
    return manifest


def group_key(label: str) -> str:
    """Panel-group suffix of a run label ('FQME_kT1' -> 'kT1', 'FQME' -> '')."""
    return label.split("_", 1)[1] if "_" in label else ""


def preset_specs(preset: str, root: str) -> list[PlotSpec]:
    """One PlotSpec per parameter group of a preset's manifest.

    Groups are derived from the run-label suffix, so a temperature scan
    yields one figure per temperature and combined frequency scans one per
    drive frequency; each figure carries a population and a kinetic-energy
    panel with all methods overlaid.
    """
    manifest = read_manifest(preset, root)
    fig_dir = os.path.join(root, preset)
    groups: dict[str, list[dict]] = {}
    for run in manifest["runs"]:
        groups.setdefault(group_key(run["label"]), []).append(run)

    suffix = " (fast preview)" if manifest.get("fast") else ""
    specs = []
    for group, runs in groups.items():
        curves = tuple(
            CurveSpec(
                csv=os.path.join(fig_dir, run["file"]),
                label=run["method"],
                style=METHOD_STYLES.get(run["method"], ""),
            )
            for run in runs
        )
        period = None
        if runs and runs[0].get("A", 0) > 0 and runs[0].get("Omega", 0) > 0:
            period = 2.0 * math.pi / float(runs[0]["Omega"])
        name = f"{preset}_{group}" if group else preset
        title = f"{name}: {manifest.get('description', '')}{suffix}"
        specs.append(
            PlotSpec(
                output=os.path.join(fig_dir, name),
                panels=tuple(
                    PanelSpec(column=col, ylabel=_YLABELS[col], curves=curves) for col in _COLUMNS
                ),
                title=title,
                drive_period=period,
            )
        )
    return specs
