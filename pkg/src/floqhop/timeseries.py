"""Public time-series schema, CSV round trip and steady-state extraction.

Every run, matrix or stochastic, emits rows of the same seven columns:

    t,pop,pop_err,ekin,ekin_err,trace_defect,herm_defect

Matrix runs carry zero statistical errors and live consistency defects;
stochastic runs carry sampling errors, and only the density flavor has
nonzero defect columns (norm leak of P0 + P1 and the residual imaginary
part of the population). Values are written with 12 significant digits and
newline-terminated lines.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

__all__ = [
    "HEADER",
    "TimeSeriesRecord",
    "SteadySummary",
    "write_series",
    "read_series",
    "records_from_ensemble",
    "steady_state_summary",
]

HEADER = "t,pop,pop_err,ekin,ekin_err,trace_defect,herm_defect"
_COLUMNS = HEADER.split(",")


@dataclass(frozen=True)
class TimeSeriesRecord:
    t: float
    pop: float
    pop_err: float
    ekin: float
    ekin_err: float
    trace_defect: float
    herm_defect: float

    def row(self) -> str:
        return ",".join(f"{getattr(self, c):.11e}" for c in _COLUMNS)


def write_series(path, records) -> None:
    """Write records to ``path``; rejects non-finite values and a time grid
    that is not strictly increasing. An empty record list writes a
    header-only file."""
    records = list(records)
    last_t = -math.inf
    for i, rec in enumerate(records):
        for f in fields(rec):
            v = getattr(rec, f.name)
            if not math.isfinite(v):
                raise ValueError(f"record {i}: {f.name} is not finite ({v})")
        if not rec.t > last_t:
            raise ValueError(f"record {i}: time {rec.t} does not increase past {last_t}")
        last_t = rec.t
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HEADER + "\n")
        for rec in records:
            fh.write(rec.row() + "\n")


def read_series(path) -> list[TimeSeriesRecord]:
    """Parse a series written by :func:`write_series`, validating the header,
    per-cell floats, finiteness and a strictly increasing time grid. Errors
    name the offending line (1-based)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty file, expected header {HEADER!r}")
    if lines[0] != HEADER:
        raise ValueError(f"{path}: line 1: bad header {lines[0]!r}, expected {HEADER!r}")
    records: list[TimeSeriesRecord] = []
    last_t = -math.inf
    for ln, raw in enumerate(lines[1:], start=2):
        if raw == "":
            continue
        parts = raw.split(",")
        if len(parts) != len(_COLUMNS):
            raise ValueError(f"{path}: line {ln}: expected {len(_COLUMNS)} fields, got {len(parts)}")
        try:
            vals = [float(s) for s in parts]
        except ValueError as exc:
            raise ValueError(f"{path}: line {ln}: {exc}") from None
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"{path}: line {ln}: non-finite value")
        rec = TimeSeriesRecord(*vals)
        if not rec.t > last_t:
            raise ValueError(f"{path}: line {ln}: time {rec.t} does not increase past {last_t}")
        last_t = rec.t
        records.append(rec)
    return records


def records_from_ensemble(result) -> list[TimeSeriesRecord]:
    """Convert an :class:`~floqhop.trajectories.EnsembleResult` to records."""
    out = []
    for i, t in enumerate(result.t):
        out.append(
            TimeSeriesRecord(
                t=float(t),
                pop=float(result.pop[i]),
                pop_err=float(result.pop_err[i]),
                ekin=float(result.ekin[i]),
                ekin_err=float(result.ekin_err[i]),
                trace_defect=float(result.defect_t[i]),
                herm_defect=float(result.im_pop_t[i]),
            )
        )
    return out


@dataclass(frozen=True)
class SteadySummary:
    pop: float
    pop_err: float
    ekin: float
    ekin_err: float
    slope: float
    flat: bool
    window: tuple[float, float]


def steady_state_summary(records, drive=None, window_fraction: float = 0.2, flat_tol: float = 1e-4) -> SteadySummary:
    """Late-time averages over the final ``window_fraction`` of the grid.

    When a drive is present and the window spans at least one full period,
    the window is trimmed to a whole number of periods so the cycle average
    is unbiased. Flatness is judged by a linear fit of the population over
    the last 10 percent of the grid.
    """
    t = np.array([r.t for r in records])
    pop = np.array([r.pop for r in records])
    ekin = np.array([r.ekin for r in records])
    pop_err = np.array([r.pop_err for r in records])
    ekin_err = np.array([r.ekin_err for r in records])
    if len(t) < 4:
        raise ValueError("too few records for a steady-state summary")
    t_end = t[-1]
    t_lo = t_end - window_fraction * (t_end - t[0])
    if drive is not None and drive.A > 0:
        period = drive.period
        n_per = math.floor((t_end - t_lo) / period + 1e-9)
        if n_per >= 1:
            t_lo = t_end - n_per * period
    sel = t >= t_lo - 1e-12
    if np.count_nonzero(sel) < 2:
        sel = t >= t[-2]
    # conservative error bar: checkpoints are correlated, so keep the
    # typical single-checkpoint error instead of dividing by sqrt(count)
    p_err = float(np.median(pop_err[sel]))
    e_err = float(np.median(ekin_err[sel]))
    fit_sel = t >= t_end - 0.1 * (t_end - t[0])
    if np.count_nonzero(fit_sel) >= 2:
        slope = float(np.polyfit(t[fit_sel], pop[fit_sel], 1)[0])
    else:
        slope = 0.0
    return SteadySummary(
        pop=float(np.mean(pop[sel])),
        pop_err=p_err,
        ekin=float(np.mean(ekin[sel])),
        ekin_err=e_err,
        slope=slope,
        flat=abs(slope) < flat_tol,
        window=(float(t_lo), float(t_end)),
    )
