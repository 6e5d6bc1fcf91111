"""Command line front end.

Subcommands: ``run`` (one config, one CSV), ``compare`` (several methods on
one config, shared time grid, plus a steady-state summary), ``figure``
(canonical preset parameter sets, CSVs plus a manifest).

Exit codes: 0 success, 2 configuration problems, 3 runtime aborts.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import fqme, trajectories
from .config import MATRIX_METHODS, METHODS, ConfigError, SimConfig, parse_config
from .presets import FIGURE_PRESETS, preset_names
from .timeseries import records_from_ensemble, steady_state_summary, write_series

_EXIT_CONFIG = 2
_EXIT_RUNTIME = 3


def _execute(config: SimConfig):
    """Dispatch one config to the right engine; returns the record list."""
    if config.method in MATRIX_METHODS:
        records, _diag = fqme.run(config)
        return records
    result = trajectories.run_ensemble(config)
    return records_from_ensemble(result)


def _run_and_write(config: SimConfig, out_path: str):
    records = _execute(config)
    os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
    write_series(out_path, records)
    return records


def cmd_run(args) -> int:
    config = parse_config(args.config)
    if args.method is not None:
        config = dataclasses.replace(config, method=args.method, output=args.out or f"{args.method}.csv")
    if args.seed is not None:
        config = dataclasses.replace(config, master_seed=args.seed)
    out_path = args.out or config.output
    records = _run_and_write(config, out_path)
    summary = steady_state_summary(records, config.drive)
    print(
        f"{config.method}: wrote {out_path} ({len(records)} rows); "
        f"steady pop {summary.pop:.4f} +- {summary.pop_err:.4f}, "
        f"ekin {summary.ekin:.4f} +- {summary.ekin_err:.4f}, flat={summary.flat}"
    )
    return 0


def cmd_compare(args) -> int:
    config = parse_config(args.config)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise ConfigError([f"--methods: unknown method {m!r}; choices: {', '.join(METHODS)}" for m in bad])
    if not methods:
        raise ConfigError(["--methods: need at least one method"])
    if config.dt is None:
        # one shared step so every CSV lands on an identical time grid
        dt = min(
            trajectories.default_dt(config.drive),
            fqme.dt_ceiling(config.params, config.drive),
        )
        config = dataclasses.replace(config, dt=dt)
    os.makedirs(args.out_dir, exist_ok=True)
    summary_rows = ["method,pop,pop_err,ekin,ekin_err,slope,flat"]
    for method in methods:
        cfg = dataclasses.replace(config, method=method)
        out_path = os.path.join(args.out_dir, f"{method}.csv")
        records = _run_and_write(cfg, out_path)
        s = steady_state_summary(records, cfg.drive)
        summary_rows.append(
            f"{method},{s.pop:.6f},{s.pop_err:.6f},{s.ekin:.6f},{s.ekin_err:.6f},{s.slope:.3e},{s.flat}"
        )
        print(f"{method}: wrote {out_path}")
    summary_path = os.path.join(args.out_dir, "summary.csv")
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(summary_rows) + "\n")
    print(f"wrote {summary_path}")
    return 0


def cmd_figure(args) -> int:
    preset = FIGURE_PRESETS[args.preset]
    runs = list(preset.runs)
    if args.methods:
        wanted = [m.strip() for m in args.methods.split(",") if m.strip()]
        bad = [m for m in wanted if m not in METHODS]
        if bad:
            raise ConfigError([f"--methods: unknown method {m!r}" for m in bad])
        runs = [r for r in runs if r.method in wanted]
    if args.only:
        runs = [r for r in runs if args.only in r.label]
    if not runs:
        raise ConfigError([f"no preset runs left after filtering {args.preset}"])
    out_dir = os.path.join(args.out_dir, preset.name)
    os.makedirs(out_dir, exist_ok=True)
    manifest = {"preset": preset.name, "description": preset.description, "fast": bool(args.fast), "runs": []}
    for r in runs:
        config = r.config()
        if args.fast:
            config = dataclasses.replace(
                config,
                n_traj=min(config.n_traj, 2000),
                t_final=min(config.t_final, 8.0),
            )
        if args.seed is not None:
            config = dataclasses.replace(config, master_seed=args.seed)
        out_path = os.path.join(out_dir, f"{r.label}.csv")
        print(f"running {preset.name}/{r.label} ...", flush=True)
        _run_and_write(config, out_path)
        manifest["runs"].append(
            {
                "file": f"{r.label}.csv",
                "label": r.label,
                "method": r.method,
                "Ed_bar": r.params.Ed_bar,
                "g": r.params.g,
                "omega": r.params.omega,
                "Gamma": r.params.Gamma,
                "kT_el": r.params.kT_el,
                "kT_nuc0": r.params.kT_nuc0,
                "A": r.drive.A,
                "Omega": r.drive.Omega,
                "dt": config.dt,
                "t_final": config.t_final,
                "master_seed": config.master_seed,
                "n_traj": config.n_traj,
            }
        )
    manifest_path = os.path.join(out_dir, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {manifest_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="floqhop", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one config and write its CSV")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--method", choices=METHODS, help="override the configured method")
    p_run.add_argument("--seed", type=int, help="override the master seed")
    p_run.add_argument("--out", help="override the output CSV path")
    p_run.set_defaults(func=cmd_run)

    p_cmp = sub.add_parser("compare", help="run several methods on one config")
    p_cmp.add_argument("--config", required=True)
    p_cmp.add_argument("--methods", required=True, help="comma separated method list")
    p_cmp.add_argument("--out-dir", required=True)
    p_cmp.set_defaults(func=cmd_compare)

    p_fig = sub.add_parser("figure", help="run a canonical preset")
    p_fig.add_argument("--preset", required=True, choices=preset_names())
    p_fig.add_argument("--out-dir", required=True)
    p_fig.add_argument("--methods", help="restrict to these methods (comma separated)")
    p_fig.add_argument("--only", help="restrict to run labels containing this substring")
    p_fig.add_argument("--seed", type=int, help="override the master seed")
    p_fig.add_argument(
        "--fast", action="store_true",
        help="smoke mode: truncate horizon and ensemble size (not for production numbers)",
    )
    p_fig.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for line in exc.errors:
            print(f"floqhop: config error: {line}", file=sys.stderr)
        return _EXIT_CONFIG
    except (RuntimeError, ValueError, OSError) as exc:
        print(f"floqhop: runtime error: {exc}", file=sys.stderr)
        return _EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
