#!/usr/bin/env python3
"""Convergence tables for a config: time step, basis size, ensemble size.

For matrix methods the sweep halves dt twice and grows the vibronic basis;
for trajectory methods it halves dt and quadruples the ensemble (halving
the expected standard error). Each row reports the steady-state population
and kinetic energy so you can judge when the observable of interest stops
moving relative to its error bar.

Example:
    python3 scripts/convergence_sweep.py --config configs/relax.ini
    python3 scripts/convergence_sweep.py --config configs/driven.ini --method FaQME
"""

from __future__ import annotations

import argparse
import dataclasses
import time

from floqhop import fqme
from floqhop.config import MATRIX_METHODS, parse_config
from floqhop.timeseries import records_from_ensemble, steady_state_summary
from floqhop.trajectories import run_ensemble


def steady_row(config):
    t0 = time.time()
    if config.method in MATRIX_METHODS:
        records, diag = fqme.run(config)
        extra = f"basis={diag['basis_N']}"
    else:
        result = run_ensemble(config)
        records = records_from_ensemble(result)
        extra = f"n_traj={config.n_traj}"
    s = steady_state_summary(records, drive=config.drive)
    return s, extra, time.time() - t0


def fmt(s, label, extra, wall):
    return (
        f"{label:<28} {extra:<14} pop={s.pop:.5f}±{s.pop_err:.5f}  "
        f"ekin={s.ekin:.5f}±{s.ekin_err:.5f}  slope={s.slope:+.2e}  [{wall:.0f} s]"
    )


def run(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--config", required=True)
    ap.add_argument("--method", help="override the config's method")
    args = ap.parse_args(argv)

    base = parse_config(args.config)
    if args.method:
        base = dataclasses.replace(base, method=args.method, output=f"{args.method}.csv")
    if base.dt is None:
        raise SystemExit("config must pin dt so the sweep has a starting point")

    print(f"# method={base.method}  t_final={base.t_final}  seed={base.master_seed}")

    print("\n## time step")
    for factor in (1, 2, 4):
        cfg = dataclasses.replace(base, dt=base.dt / factor)
        s, extra, wall = steady_row(cfg)
        print(fmt(s, f"dt={cfg.dt:g}", extra, wall))

    if base.method in MATRIX_METHODS:
        print("\n## basis size")
        for n in (base.basis_N, base.basis_N + 10, base.basis_N + 20):
            cfg = dataclasses.replace(base, basis_N=n)
            s, extra, wall = steady_row(cfg)
            print(fmt(s, f"basis_N={n} (requested)", extra, wall))
    else:
        print("\n## ensemble size")
        for factor in (1, 4, 16):
            cfg = dataclasses.replace(base, n_traj=base.n_traj * factor)
            s, extra, wall = steady_row(cfg)
            print(fmt(s, f"n_traj={cfg.n_traj}", extra, wall))
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
