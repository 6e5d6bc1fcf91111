"""Run configuration: a flat INI document with [model], [drive] and [run].

Physics parameters have no silent defaults; numerical knobs do and are
documented next to their fields. Validation collects every violation it can
find before failing, and unknown keys come back with a nearest-key hint.
"""
from __future__ import annotations

import configparser
import difflib
import os
from dataclasses import dataclass
from types import SimpleNamespace

from .model import DriveParams, ModelParams

__all__ = ["SimConfig", "ConfigError", "parse_config", "METHODS"]

METHODS = ("FQME", "FaQME", "FSH", "FaSH", "FaSH-density")
MATRIX_METHODS = ("FQME", "FaQME")

_MODEL_KEYS = ("Ed_bar", "g", "omega", "Gamma", "kT_el", "kT_nuc0")
_DRIVE_KEYS = ("A", "Omega")
_RUN_KEYS = ("method", "dt", "t_final", "output_stride", "n_traj", "basis_N", "master_seed", "output")


class ConfigError(Exception):
    """Carries the full list of collected violations."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


@dataclass
class SimConfig:
    """One fully resolved run.

    Numerical defaults: dt None (engine picks a method-appropriate step),
    t_final 20/Gamma, output_stride 10, n_traj 20000, basis_N 40 (grown
    automatically if the initial thermal state needs more), master_seed
    12345, output "<method>.csv".
    """

    method: str
    params: ModelParams
    drive: DriveParams
    dt: float | None = None
    t_final: float | None = None
    output_stride: int = 10
    n_traj: int = 20000
    basis_N: int = 40
    master_seed: int = 12345
    output: str | None = None

    def __post_init__(self) -> None:
        errors = validate_fields(self)
        if errors:
            raise ConfigError(errors)
        if self.t_final is None:
            self.t_final = 20.0 / self.params.Gamma
        if self.output is None:
            self.output = f"{self.method}.csv"


def validate_fields(cfg: SimConfig) -> list[str]:
    errors = []
    if cfg.method not in METHODS:
        hint = difflib.get_close_matches(cfg.method, METHODS, n=1)
        extra = f" (did you mean {hint[0]!r}?)" if hint else ""
        errors.append(f"run.method: unknown method {cfg.method!r}{extra}; choices: {', '.join(METHODS)}")
    if cfg.dt is not None and not cfg.dt > 0:
        errors.append(f"run.dt: must be positive, got {cfg.dt}")
    if cfg.t_final is not None and not cfg.t_final > 0:
        errors.append(f"run.t_final: must be positive, got {cfg.t_final}")
    if cfg.output_stride < 1:
        errors.append(f"run.output_stride: must be at least 1, got {cfg.output_stride}")
    if cfg.basis_N < 2:
        errors.append(f"run.basis_N: must be at least 2, got {cfg.basis_N}")
    if cfg.master_seed < 0:
        errors.append(f"run.master_seed: must be non-negative, got {cfg.master_seed}")
    if cfg.method not in MATRIX_METHODS and cfg.n_traj < 100:
        errors.append(f"run.n_traj: need at least 100 trajectories, got {cfg.n_traj}")
    return errors


def _suggest(key: str, known) -> str:
    hit = difflib.get_close_matches(key, known, n=1)
    return f" (did you mean {hit[0]!r}?)" if hit else ""


def _read_section(cp, section, known, errors):
    present = {}
    if cp.has_section(section):
        for key, value in cp.items(section):
            if key not in known:
                errors.append(f"{section}.{key}: unknown key{_suggest(key, known)}")
            else:
                present[key] = value
    return present


def _get_float(section, values, key, errors, required=False):
    if key not in values:
        if required:
            errors.append(f"{section}.{key}: required key missing")
        return None
    try:
        return float(values[key])
    except ValueError:
        errors.append(f"{section}.{key}: not a number: {values[key]!r}")
        return None


def _get_int(section, values, key, errors):
    if key not in values:
        return None
    try:
        return int(values[key])
    except ValueError:
        errors.append(f"{section}.{key}: not an integer: {values[key]!r}")
        return None


def parse_config(path: str) -> SimConfig:
    """Parse and validate ``path``; raises :class:`ConfigError` with every
    collected problem when anything is wrong."""
    if not os.path.exists(path):
        raise ConfigError([f"config file not found: {path}"])
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cp.read_file(fh, source=path)
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ConfigError([f"{path}: not a readable key-value document: {exc}"]) from None

    errors: list[str] = []
    for section in cp.sections():
        if section not in ("model", "drive", "run"):
            errors.append(f"[{section}]: unknown section{_suggest(section, ('model', 'drive', 'run'))}")
    model_vals = _read_section(cp, "model", _MODEL_KEYS, errors)
    drive_vals = _read_section(cp, "drive", _DRIVE_KEYS, errors)
    run_vals = _read_section(cp, "run", _RUN_KEYS, errors)
    if not cp.has_section("model"):
        errors.append("[model]: section missing")
    if not cp.has_section("run"):
        errors.append("[run]: section missing")

    model_kw = {}
    for key in _MODEL_KEYS:
        v = _get_float("model", model_vals, key, errors, required=cp.has_section("model"))
        if v is not None:
            model_kw[key] = v

    a_val = _get_float("drive", drive_vals, "A", errors, required=cp.has_section("drive"))
    omega_val = _get_float("drive", drive_vals, "Omega", errors)
    if not cp.has_section("drive"):
        a_val = 0.0
    if a_val is not None and a_val > 0 and omega_val is None and "Omega" not in drive_vals:
        errors.append("drive.Omega: required when A > 0")

    method = run_vals.get("method")
    if method is None and cp.has_section("run"):
        errors.append("run.method: required key missing")

    dt = _get_float("run", run_vals, "dt", errors)
    t_final = _get_float("run", run_vals, "t_final", errors)
    stride = _get_int("run", run_vals, "output_stride", errors)
    n_traj = _get_int("run", run_vals, "n_traj", errors)
    basis_n = _get_int("run", run_vals, "basis_N", errors)
    seed = _get_int("run", run_vals, "master_seed", errors)
    output = run_vals.get("output")

    # Field-level run checks run here too so a broken [model] section does
    # not mask [run] violations (validation is not fail-fast).
    errors.extend(validate_fields(SimpleNamespace(
        method=method if method is not None else METHODS[0],
        dt=dt,
        t_final=t_final,
        output_stride=stride if stride is not None else 10,
        basis_N=basis_n if basis_n is not None else 40,
        master_seed=seed if seed is not None else 12345,
        n_traj=n_traj if n_traj is not None else 20000,
    )))

    params = None
    if len(model_kw) == len(_MODEL_KEYS):
        try:
            params = ModelParams(**model_kw)
        except ValueError as exc:
            errors.append(f"[model]: {exc}")
    drive = None
    if a_val is not None:
        try:
            drive = DriveParams(A=a_val, Omega=omega_val if omega_val is not None else 0.0)
        except ValueError as exc:
            errors.append(f"[drive]: {exc}")

    if errors or params is None or drive is None or method is None:
        if not errors:
            errors.append("config incomplete")
        raise ConfigError(errors)

    kwargs = dict(method=method, params=params, drive=drive)
    if dt is not None:
        kwargs["dt"] = dt
    if t_final is not None:
        kwargs["t_final"] = t_final
    if stride is not None:
        kwargs["output_stride"] = stride
    if n_traj is not None:
        kwargs["n_traj"] = n_traj
    if basis_n is not None:
        kwargs["basis_N"] = basis_n
    if seed is not None:
        kwargs["master_seed"] = seed
    if output is not None:
        kwargs["output"] = output
    return SimConfig(**kwargs)
