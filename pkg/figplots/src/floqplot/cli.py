"""Command-line entry points: `floqplot plot` and `floqplot check`."""

from __future__ import annotations

import argparse
import sys

from .checks import run_checks
from .csvio import SchemaError
from .render import plot_compare
from .spec import SpecError, load_spec, preset_specs

_PRESETS = ("fig1", "fig2", "fig3", "fig4", "fig5")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="floqplot", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    p_plot = sub.add_parser("plot", help="render PNG + SVG from a spec file or a preset directory")
    src = p_plot.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec", help="JSON plot specification")
    src.add_argument("--preset", choices=_PRESETS, help="preset name (requires --dir)")
    p_plot.add_argument("--dir", help="root directory holding <preset>/ output")

    p_check = sub.add_parser("check", help="scripted qualitative assertions on preset CSVs")
    p_check.add_argument("--preset", choices=_PRESETS, required=True)
    p_check.add_argument("--dir", required=True)
    return p


def cmd_plot(args) -> int:
    if args.preset and not args.dir:
        print("floqplot: spec error: --preset requires --dir", file=sys.stderr)
        return 2
    specs = [load_spec(args.spec)] if args.spec else preset_specs(args.preset, args.dir)
    for spec in specs:
        written, warnings = plot_compare(spec)
        for w in warnings:
            print(f"floqplot: warning: {w}", file=sys.stderr)
        for path in written:
            print(f"wrote {path}")
    return 0


def cmd_check(args) -> int:
    results = run_checks(args.preset, args.dir)
    failed = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.name} — {r.detail}")
        failed += 0 if r.ok else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "plot":
            return cmd_plot(args)
        return cmd_check(args)
    except (SchemaError, SpecError) as exc:
        for line in exc.messages:
            print(f"floqplot: {'schema' if isinstance(exc, SchemaError) else 'spec'} error: {line}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"floqplot: runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
