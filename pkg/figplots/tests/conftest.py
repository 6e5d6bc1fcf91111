"""Synthetic-data helpers shared by the floqplot tests."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

HEADER = "t,pop,pop_err,ekin,ekin_err,trace_defect,herm_defect"


def write_csv(path, t, pop, pop_err=0.0, ekin=0.5, ekin_err=0.0):
    t = np.asarray(t, dtype=float)
    cols = [np.broadcast_to(np.asarray(c, dtype=float), t.shape) for c in (pop, pop_err, ekin, ekin_err)]
    lines = [HEADER]
    for i in range(len(t)):
        vals = [t[i]] + [c[i] for c in cols] + [0.0, 0.0]
        lines.append(",".join(f"{v:.12g}" for v in vals))
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def manifest_run(label, method, *, file=None, A=0.0, Omega=0.0, kT=1.0):
    return {
        "file": file or f"{label}.csv",
        "label": label,
        "method": method,
        "Ed_bar": -2.0,
        "g": 0.75,
        "omega": 0.3,
        "Gamma": 1.0,
        "kT_el": kT,
        "kT_nuc0": kT,
        "A": A,
        "Omega": Omega,
        "dt": 0.02,
        "t_final": 400.0,
        "master_seed": 12345,
        "n_traj": 20000,
    }


def write_manifest(fig_dir, preset, runs, fast=False):
    fig_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "preset": preset,
        "description": f"synthetic {preset} dataset",
        "fast": fast,
        "runs": runs,
    }
    (fig_dir / "manifest.json").write_text(json.dumps(manifest, indent=2))


METHODS = ("FQME", "FaQME", "FSH", "FaSH", "FaSH-density")
TRAJ = ("FSH", "FaSH", "FaSH-density")


@pytest.fixture
def grid():
    return np.arange(0.0, 400.0 + 1e-9, 0.2)


def sine_pop(t, base, amp, Omega, noise=0.0, seed=0):
    x = base + amp * np.sin(Omega * np.asarray(t))
    if noise:
        x = x + np.random.default_rng(seed).normal(0.0, noise, size=len(t))
    return x


def preset_dataset(root, preset, groups):
    """Write a full synthetic preset: groups = {suffix: {method: kwargs}}.

    kwargs per method: pop (array), plus optional pop_err/ekin/ekin_err
    scalars or arrays, plus A/Omega/kT for the manifest entry.
    """
    fig_dir = root / preset
    fig_dir.mkdir(parents=True, exist_ok=True)
    runs = []
    for suffix, methods in groups.items():
        for method, kw in methods.items():
            label = f"{method}_{suffix}" if suffix else method
            t = kw["t"]
            write_csv(
                fig_dir / f"{label}.csv", t, kw["pop"],
                pop_err=kw.get("pop_err", 0.0),
                ekin=kw.get("ekin", 0.5),
                ekin_err=kw.get("ekin_err", 0.0),
            )
            runs.append(
                manifest_run(label, method, A=kw.get("A", 0.0), Omega=kw.get("Omega", 0.0), kT=kw.get("kT", 1.0))
            )
    write_manifest(fig_dir, preset, runs)
    return fig_dir
