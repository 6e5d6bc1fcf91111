"""Diabatic model: one harmonic mode coupled to a resonant electronic level.

Two diabatic surfaces share the same curvature. Surface 0 is the bare
oscillator; surface 1 is shifted linearly by the electron-phonon coupling
and offset by the bare level energy. Units: hbar = 1, nuclear mass = 1,
energies in units of the hybridization unless stated otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelParams",
    "DriveParams",
    "renormalized_level",
    "bare_level",
    "potential",
    "force",
    "gap",
]


@dataclass(frozen=True)
class ModelParams:
    """Static model parameters. Immutable after construction.

    Parameters
    ----------
    Ed_bar : float
        Renormalized level energy (bare level minus the polaron shift g^2/omega).
        This is the energy difference between the two surface minima.
    g : float
        Electron-phonon coupling strength, g >= 0.
    omega : float
        Harmonic frequency of the mode, > 0.
    Gamma : float
        Hybridization (wide-band level broadening), > 0.
    kT_el : float
        Electronic bath temperature, > 0.
    kT_nuc0 : float
        Initial nuclear temperature, > 0. May differ from kT_el.
    mass, hbar : float
        Fixed to 1; kept as named fields so formulas read dimensionally.
    """

    Ed_bar: float
    g: float
    omega: float
    Gamma: float
    kT_el: float
    kT_nuc0: float
    mass: float = field(default=1.0)
    hbar: float = field(default=1.0)

    def __post_init__(self) -> None:
        problems = []
        if not self.omega > 0:
            problems.append(f"omega must be positive, got {self.omega}")
        if not self.Gamma > 0:
            problems.append(f"Gamma must be positive, got {self.Gamma}")
        if not self.kT_el > 0:
            problems.append(f"kT_el must be positive, got {self.kT_el}")
        if not self.kT_nuc0 > 0:
            problems.append(f"kT_nuc0 must be positive, got {self.kT_nuc0}")
        if self.g < 0:
            problems.append(f"g must be non-negative, got {self.g}")
        if self.mass != 1.0:
            problems.append("mass is fixed to 1")
        if self.hbar != 1.0:
            problems.append("hbar is fixed to 1")
        for name in ("Ed_bar", "g", "omega", "Gamma", "kT_el", "kT_nuc0"):
            v = getattr(self, name)
            if not math.isfinite(v):
                problems.append(f"{name} must be finite, got {v}")
        if problems:
            raise ValueError("invalid ModelParams: " + "; ".join(problems))

    @property
    def reorganization(self) -> float:
        """Polaron shift g^2 / (hbar * omega)."""
        return self.g * self.g / (self.hbar * self.omega)

    @property
    def Ed(self) -> float:
        """Bare level energy Ed_bar + g^2/omega."""
        return self.Ed_bar + self.reorganization

    @property
    def lam(self) -> float:
        """Dimensionless displacement g / (hbar * omega) between the wells."""
        return self.g / (self.hbar * self.omega)


@dataclass(frozen=True)
class DriveParams:
    """Periodic drive of the level energy: Ed(t) = Ed + A * sin(Omega * t).

    A = 0 turns the drive off; Omega may then be omitted.
    """

    A: float = 0.0
    Omega: float = 0.0

    def __post_init__(self) -> None:
        if self.A < 0:
            raise ValueError(f"drive amplitude A must be non-negative, got {self.A}")
        if self.A > 0 and not self.Omega > 0:
            raise ValueError("drive frequency Omega must be positive when A > 0")
        if self.Omega < 0:
            raise ValueError(f"Omega must be non-negative, got {self.Omega}")

    @property
    def z(self) -> float:
        """Ratio A / Omega controlling the sideband weights (0 when undriven)."""
        if self.A == 0.0:
            return 0.0
        return self.A / self.Omega

    @property
    def period(self) -> float:
        if self.Omega <= 0:
            raise ValueError("period undefined for an undriven model")
        return 2.0 * math.pi / self.Omega


def renormalized_level(Ed: float, g: float, omega: float) -> float:
    """Renormalized level energy: bare Ed minus the polaron shift g^2/omega."""
    return Ed - g * g / omega


def bare_level(Ed_bar: float, g: float, omega: float) -> float:
    """Inverse of :func:`renormalized_level`."""
    return Ed_bar + g * g / omega


def _coupling_slope(params: ModelParams) -> float:
    # linear shift of the occupied surface: sqrt(2 m omega / hbar) * g * x
    return math.sqrt(2.0 * params.mass * params.omega / params.hbar) * params.g


def potential(params: ModelParams, surface: int, x):
    """Diabatic potential energy on ``surface`` (0 or 1) at position ``x``.

    Surface 1 uses the bare level offset, so the two minima differ by Ed_bar.
    Accepts scalars or arrays.
    """
    if surface not in (0, 1):
        raise ValueError(f"surface must be 0 or 1, got {surface}")
    x = np.asarray(x, dtype=float)
    v = 0.5 * params.mass * params.omega**2 * x * x
    if surface == 1:
        v = v + _coupling_slope(params) * x + params.Ed
    if v.ndim == 0:
        return float(v)
    return v


def force(params: ModelParams, surface: int, x):
    """Force -dV/dx on ``surface`` at ``x``. Accepts scalars or arrays."""
    if surface not in (0, 1):
        raise ValueError(f"surface must be 0 or 1, got {surface}")
    x = np.asarray(x, dtype=float)
    f = -params.mass * params.omega**2 * x
    if surface == 1:
        f = f - _coupling_slope(params)
    if f.ndim == 0:
        return float(f)
    return f


def gap(params: ModelParams, x):
    """Diabatic gap V1(x) - V0(x) = Ed + sqrt(2 m omega) g x."""
    x = np.asarray(x, dtype=float)
    dv = params.Ed + _coupling_slope(params) * x
    if dv.ndim == 0:
        return float(dv)
    return dv
