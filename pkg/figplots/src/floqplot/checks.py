"""Scripted qualitative assertions on preset output.

These encode the headline claim of each demonstration figure as a check on
the underlying CSVs, so "does the regenerated data still show the effect?"
has a yes/no answer without a human reading the image. They expect
full-fidelity preset data; fast-preview runs are too short for the
steady-state windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .csvio import Curve, read_curve
from .spec import SpecError, group_key, read_manifest

import os

_SIGMA_FLOOR = 0.01 / 3.0   # deterministic curves: fall back to a 0.01 band


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _steady(curve: Curve, period: float | None) -> tuple[float, float, float, float]:
    """(pop, pop_sigma, ekin, ekin_sigma) over the final fifth of the run.

    The window is trimmed to whole drive periods when a period is given;
    deterministic series (zero reported error) get a floor sigma so
    3-sigma comparisons stay meaningful.
    """
    t = curve.t
    t_lo = t[-1] - 0.2 * (t[-1] - t[0])
    if period:
        n_per = math.floor((t[-1] - t_lo) / period + 1e-9)
        if n_per >= 1:
            t_lo = t[-1] - n_per * period
    sel = t >= t_lo - 1e-9
    pop_sig = float(np.median(curve.pop_err[sel]))
    ekin_sig = float(np.median(curve.ekin_err[sel]))
    return (
        float(np.mean(curve.pop[sel])),
        max(pop_sig, _SIGMA_FLOOR),
        float(np.mean(curve.ekin[sel])),
        max(ekin_sig, _SIGMA_FLOOR),
    )


def _tail_window(curve: Curve, Omega: float, n_periods: int = 3) -> tuple[np.ndarray, np.ndarray]:
    period = 2.0 * math.pi / Omega
    span = curve.t[-1] - curve.t[0]
    if span < period:
        raise SpecError(
            [f"{curve.path}: run spans {span:.3g} < one drive period {period:.3g}; "
             "oscillation checks need full-length preset data"]
        )
    n = min(n_periods, int(span / period))
    sel = curve.t >= curve.t[-1] - n * period - 1e-9
    return curve.t[sel], curve.pop[sel]


def _amp_at(curve: Curve, Omega: float) -> float:
    """Oscillation amplitude of the steady population at the drive frequency."""
    t, x = _tail_window(curve, Omega)
    x = x - np.polyval(np.polyfit(t, x, 1), t)
    return 2.0 * abs(np.sum(x * np.exp(-1j * Omega * t))) / len(x)


def _peak_to_trough(curve: Curve, Omega: float) -> float:
    _, x = _tail_window(curve, Omega)
    return float(np.max(x) - np.min(x))


def _load_group(preset: str, root: str) -> dict[str, dict[str, tuple[Curve, dict]]]:
    """{group: {method: (curve, run-entry)}} for every run in the manifest."""
    manifest = read_manifest(preset, root)
    fig_dir = os.path.join(root, preset)
    out: dict[str, dict[str, tuple[Curve, dict]]] = {}
    for run in manifest["runs"]:
        curve = read_curve(os.path.join(fig_dir, run["file"]))
        if len(curve) == 0:
            raise SpecError([f"{run['file']}: empty series; checks need data"])
        out.setdefault(group_key(run["label"]), {})[run["method"]] = (curve, run)
    return out


def _require(group: dict, methods: tuple[str, ...], where: str) -> None:
    missing = [m for m in methods if m not in group]
    if missing:
        raise SpecError([f"{where}: missing runs for {', '.join(missing)}"])


def _pairwise_steady_agreement(group: dict, period: float | None, where: str) -> list[CheckResult]:
    stats = {m: _steady(c, period) for m, (c, _) in group.items()}
    results = []
    names = sorted(stats)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            pa, sa, ea, ta = stats[a]
            pb, sb, eb, tb = stats[b]
            pop_tol = 3.0 * math.hypot(sa, sb)
            ekin_tol = 3.0 * math.hypot(ta, tb)
            ok = abs(pa - pb) < pop_tol and abs(ea - eb) < ekin_tol
            results.append(
                CheckResult(
                    f"{where}: {a} vs {b} steady state",
                    ok,
                    f"Δpop={abs(pa - pb):.4f} (tol {pop_tol:.4f}), Δekin={abs(ea - eb):.4f} (tol {ekin_tol:.4f})",
                )
            )
    return results


def _oscillation_split(
    group: dict, Omega: float, loud: tuple[str, ...], quiet: tuple[str, ...], where: str
) -> list[CheckResult]:
    """Loud methods ride the drive; quiet methods stay below 10% of FQME."""
    ref = _amp_at(group["FQME"][0], Omega)
    results = [
        CheckResult(f"{where}: FQME oscillates", ref > 0.01, f"amplitude at drive freq {ref:.4f} > 0.01")
    ]
    for m in loud:
        amp = _amp_at(group[m][0], Omega)
        results.append(
            CheckResult(f"{where}: {m} oscillates", amp > 0.5 * ref, f"amp {amp:.4f} vs FQME {ref:.4f}")
        )
    for m in quiet:
        amp = _amp_at(group[m][0], Omega)
        results.append(
            CheckResult(f"{where}: {m} smooth", amp < 0.1 * ref, f"amp {amp:.4f} < 10% of FQME {ref:.4f}")
        )
    return results


def run_checks(preset: str, root: str) -> list[CheckResult]:
    groups = _load_group(preset, root)
    results: list[CheckResult] = []

    if preset == "fig1":
        _require(groups.get("kT1", {}), ("FQME", "FaQME", "FSH", "FaSH"), "fig1 kT1")
        group = groups["kT1"]
        Omega = float(group["FQME"][1]["Omega"])
        results += _oscillation_split(group, Omega, loud=("FSH",), quiet=("FaQME", "FaSH"), where="fig1 kT=1")

    elif preset == "fig2":
        group = groups.get("", {})
        _require(group, ("FQME", "FaQME", "FSH", "FaSH", "FaSH-density"), "fig2")
        results += _pairwise_steady_agreement(group, None, "fig2")

    elif preset == "fig3":
        spread: dict[str, list[float]] = {}
        for gname, group in sorted(groups.items()):
            _require(group, ("FQME", "FaQME", "FSH", "FaSH", "FaSH-density"), f"fig3 {gname}")
            Omega = float(next(iter(group.values()))[1]["Omega"])
            period = 2.0 * math.pi / Omega
            results += _pairwise_steady_agreement(group, period, f"fig3 {gname}")
            for m, (c, _) in group.items():
                spread.setdefault(m, []).append(_steady(c, period)[0])
        for m, pops in sorted(spread.items()):
            delta = max(pops) - min(pops)
            results.append(
                CheckResult(
                    f"fig3: {m} insensitive to drive frequency", delta < 0.01,
                    f"steady-pop spread across drive frequencies {delta:.4f} < 0.01",
                )
            )

    elif preset == "fig4":
        group = groups.get("Omega10", {})
        _require(group, ("FSH", "FaSH", "FaSH-density", "FaQME"), "fig4 Omega10")
        period = 2.0 * math.pi / 10.0
        fsh = _steady(group["FSH"][0], period)
        for other in ("FaSH", "FaSH-density", "FaQME"):
            pop, psig, ekin, esig = _steady(group[other][0], period)
            hot = fsh[2] - ekin > 3.0 * math.hypot(fsh[3], esig)
            empt = pop - fsh[0] > 3.0 * math.hypot(fsh[1], psig)
            results.append(
                CheckResult(
                    f"fig4: FSH hotter than {other} at fast drive", hot,
                    f"ekin {fsh[2]:.4f} vs {ekin:.4f}",
                )
            )
            results.append(
                CheckResult(
                    f"fig4: FSH population below {other}", empt,
                    f"pop {fsh[0]:.4f} vs {pop:.4f}",
                )
            )

    elif preset == "fig5":
        group = groups.get("Omega0.5", {})
        _require(group, ("FQME", "FaQME", "FSH", "FaSH", "FaSH-density"), "fig5 Omega0.5")
        results += _oscillation_split(
            group, 0.5, loud=("FSH", "FaSH-density"), quiet=("FaQME", "FaSH"), where="fig5 Ω=0.5"
        )
        swing = _peak_to_trough(group["FQME"][0], 0.5)
        results.append(
            CheckResult("fig5: strong-drive swing is large", swing > 0.1, f"FQME peak-to-trough {swing:.3f} > 0.1")
        )

    else:
        raise SpecError([f"no checks defined for preset {preset!r}"])

    return results
