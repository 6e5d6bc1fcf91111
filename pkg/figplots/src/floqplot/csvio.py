"""Reader for the simulator's public CSV time-series contract."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

HEADER = "t,pop,pop_err,ekin,ekin_err,trace_defect,herm_defect"
_N_COLS = len(HEADER.split(","))


class SchemaError(ValueError):
    """One or more files failed schema validation; ``messages`` lists them."""

    def __init__(self, messages: list[str]):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


@dataclass(frozen=True)
class Curve:
    """One time series. Arrays are equal-length; an empty curve is valid."""

    path: str
    t: np.ndarray
    pop: np.ndarray
    pop_err: np.ndarray
    ekin: np.ndarray
    ekin_err: np.ndarray
    extra: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.t)

    def column(self, name: str) -> tuple[np.ndarray, np.ndarray]:
        """(values, one-sigma errors) for a plottable column."""
        if name == "pop":
            return self.pop, self.pop_err
        if name == "ekin":
            return self.ekin, self.ekin_err
        raise KeyError(f"no plottable column {name!r} (expected 'pop' or 'ekin')")


def read_curve(path: str) -> Curve:
    """Parse one CSV, validating the exact schema.

    Raises :class:`SchemaError` with a per-problem message list; a file
    containing only the header is returned as an empty curve.
    """
    problems: list[str] = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise SchemaError([f"{path}: {exc}"]) from exc
    if not lines or lines[0] != HEADER:
        found = lines[0] if lines else "<empty file>"
        raise SchemaError([f"{path}: line 1: expected header {HEADER!r}, found {found!r}"])

    rows = []
    prev_t = -math.inf
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split(",")
        if len(cells) != _N_COLS:
            problems.append(f"{path}: line {lineno}: expected {_N_COLS} columns, found {len(cells)}")
            continue
        try:
            values = [float(c) for c in cells]
        except ValueError:
            problems.append(f"{path}: line {lineno}: non-numeric value")
            continue
        if not all(math.isfinite(v) for v in values):
            problems.append(f"{path}: line {lineno}: non-finite value")
            continue
        if values[0] <= prev_t:
            problems.append(f"{path}: line {lineno}: time does not increase")
            continue
        prev_t = values[0]
        rows.append(values)
    if problems:
        raise SchemaError(problems)

    data = np.array(rows, dtype=float) if rows else np.empty((0, _N_COLS))
    return Curve(
        path=path,
        t=data[:, 0],
        pop=data[:, 1],
        pop_err=data[:, 2],
        ekin=data[:, 3],
        ekin_err=data[:, 4],
        extra={"trace_defect": data[:, 5], "herm_defect": data[:, 6]},
    )
