#!/usr/bin/env python3
"""Regenerate every demonstration figure dataset (and render, if possible).

Runs the `figure` presets one after another into --out-dir, then calls the
companion plotting package on each directory when it is importable. At
full fidelity the five presets take on the order of an hour; pass --fast
for a minutes-long smoke version (not converged, clearly labeled in the
manifests).

Examples:
    python3 scripts/reproduce_figures.py --out-dir figures --fast
    python3 scripts/reproduce_figures.py --out-dir figures --presets fig2 fig4
"""

from __future__ import annotations

import argparse
import sys
import time

from floqhop.cli import main as floqhop_main
from floqhop.presets import preset_names


def parse_args(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out-dir", required=True, help="root directory for per-preset subdirectories")
    ap.add_argument("--presets", nargs="*", default=list(preset_names()), choices=preset_names())
    ap.add_argument("--fast", action="store_true", help="small ensembles / short horizons")
    ap.add_argument("--seed", type=int, help="override the preset master seed")
    ap.add_argument("--no-plot", action="store_true", help="skip rendering even if floqplot is installed")
    return ap.parse_args(argv)


def run(argv=None) -> int:
    args = parse_args(argv)
    for preset in args.presets:
        cmd = ["figure", "--preset", preset, "--out-dir", args.out_dir]
        if args.fast:
            cmd.append("--fast")
        if args.seed is not None:
            cmd += ["--seed", str(args.seed)]
        t0 = time.time()
        rc = floqhop_main(cmd)
        if rc != 0:
            print(f"{preset}: simulation failed (exit {rc})", file=sys.stderr)
            return rc
        print(f"{preset}: data complete in {time.time() - t0:.0f} s")

    if args.no_plot:
        return 0
    try:
        from floqplot.cli import main as floqplot_main
    except ImportError:
        print("floqplot not installed; CSV data written, skipping rendering")
        return 0
    for preset in args.presets:
        rc = floqplot_main(["plot", "--preset", preset, "--dir", args.out_dir])
        if rc != 0:
            print(f"{preset}: plotting failed (exit {rc})", file=sys.stderr)
            return rc
        print(f"{preset}: figure rendered")
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
