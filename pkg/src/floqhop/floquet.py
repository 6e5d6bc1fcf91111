"""Sideband weights and modified Fermi functions for a sinusoidally driven level.

A level driven as Ed + A*sin(Omega*t) picks up a time-periodic phase whose
harmonic content is Bessel-weighted at z = A/Omega. The electronic occupation
factor seen by the slow degrees of freedom is then a sideband sum over the
bare Fermi function shifted by multiples of Omega, either instantaneous
(complex valued, time periodic) or cycle averaged (real).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

__all__ = [
    "FloquetWeights",
    "bessel_weights",
    "drive_phase",
    "fermi",
    "fermi_floquet_shifted",
    "fermi_floquet_t",
    "fermi_floquet_avg",
]

# exponent clamp keeping exp() finite in float64
_EXP_CLAMP = 700.0


@dataclass(frozen=True)
class FloquetWeights:
    """Bessel weights J_{-n_max..n_max}(z) with their truncation order.

    ``j[k]`` holds J_{k - n_max}(z); ``tail`` is the leftover weight
    1 - sum(j**2) at the chosen order.
    """

    z: float
    n_max: int
    j: np.ndarray
    tail: float

    def order(self, n: int) -> float:
        """J_n(z) for |n| <= n_max."""
        if abs(n) > self.n_max:
            raise IndexError(f"order {n} beyond truncation {self.n_max}")
        return float(self.j[n + self.n_max])


def bessel_weights(z: float, tol: float = 1e-10) -> FloquetWeights:
    """Weights J_n(z) truncated so the missing squared weight is below ``tol``.

    The sum rule sum_n J_n(z)^2 = 1 fixes the truncation: n_max is the
    smallest order whose symmetric window satisfies 1 - sum < tol. Raises
    RuntimeError if the window max(50, ceil(z) + 60) is not enough.
    """
    if z < 0:
        raise ValueError(f"z must be non-negative, got {z}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    hard_limit = max(50, math.ceil(z) + 60)
    orders = np.arange(0, hard_limit + 1)
    jpos = special.jv(orders, z)
    # running tail mass: 1 - J0^2 - 2*sum_{n=1..m} Jn^2
    mass = jpos[0] ** 2 + 2.0 * np.cumsum(jpos[1:] ** 2)
    mass = np.concatenate(([jpos[0] ** 2], mass))
    tails = 1.0 - mass
    ok = np.nonzero(tails < tol)[0]
    if ok.size == 0:
        raise RuntimeError(
            f"sideband weights did not converge by order {hard_limit} "
            f"(z={z}, tol={tol}, best tail={tails[-1]:.3e})"
        )
    n_max = int(ok[0])
    # J_{-n} = (-1)^n J_n
    signs = (-1.0) ** orders[1 : n_max + 1]
    j = np.concatenate(((signs * jpos[1 : n_max + 1])[::-1], jpos[: n_max + 1]))
    return FloquetWeights(z=z, n_max=n_max, j=j, tail=float(tails[n_max]))


def drive_phase(t, drive) -> float | np.ndarray:
    """Accumulated drive phase (A/Omega) * (1 - cos(Omega t)); zero when A = 0."""
    if drive.A == 0.0:
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        return float(out) if out.ndim == 0 else out
    out = (drive.A / drive.Omega) * (1.0 - np.cos(drive.Omega * np.asarray(t, dtype=float)))
    return float(out) if np.ndim(out) == 0 else out


def fermi(x, kT: float):
    """Fermi occupation 1 / (1 + exp(x/kT)), overflow safe. x is measured
    from the chemical potential."""
    if not kT > 0:
        raise ValueError(f"kT must be positive, got {kT}")
    arg = np.clip(np.asarray(x, dtype=float) / kT, -_EXP_CLAMP, _EXP_CLAMP)
    out = 1.0 / (1.0 + np.exp(arg))
    return float(out) if out.ndim == 0 else out


def _sideband_orders(weights: FloquetWeights) -> np.ndarray:
    return np.arange(-weights.n_max, weights.n_max + 1)


def fermi_floquet_shifted(x, drive, weights: FloquetWeights, kT: float) -> np.ndarray:
    """Sideband table f(x - n Omega) for n = -n_max..n_max, shape x.shape + (2 n_max + 1,).

    This is the expensive ingredient of both dressed Fermi factors and depends
    only on position, not time; callers evaluating several times at fixed
    positions can build it once and pass it through the ``shifted`` argument.
    """
    x = np.asarray(x, dtype=float)
    n = _sideband_orders(weights)
    return fermi(x[..., None] - n * drive.Omega, kT)


def fermi_floquet_t(x, t: float, drive, weights: FloquetWeights, kT: float,
                    shifted: np.ndarray | None = None):
    """Instantaneous sideband-dressed Fermi factor (complex).

    Equals the double sideband sum
        sum_{n,m} i^n (-i)^m J_n J_m exp(i (n-m) Omega t) f(x - m Omega)
    truncated at |n|, |m| <= n_max. The sum factorizes exactly into the two
    single sums evaluated here. Vectorized over ``x``. Reduces to the bare
    Fermi function when the drive is off. ``shifted``, if given, must be
    ``fermi_floquet_shifted(x, drive, weights, kT)``.
    """
    x = np.asarray(x, dtype=float)
    if weights.n_max == 0:
        out = fermi(x, kT) + 0.0j
        return complex(out) if np.ndim(out) == 0 else out
    n = _sideband_orders(weights)
    phases = np.exp(1j * n * drive.Omega * t) * (1j) ** n
    lead = np.sum(weights.j * phases)
    if shifted is None:
        shifted = fermi(x[..., None] - n * drive.Omega, kT)
    trail = np.sum(weights.j * np.conj(phases) * shifted, axis=-1)
    out = lead * trail
    return complex(out) if np.ndim(out) == 0 else out


def fermi_floquet_avg(x, drive, weights: FloquetWeights, kT: float,
                      shifted: np.ndarray | None = None):
    """Cycle-averaged sideband-dressed Fermi factor sum_n J_n^2 f(x - n Omega).

    Real valued; equals the time average of :func:`fermi_floquet_t` over one
    drive period. Vectorized over ``x``. ``shifted``, if given, must be
    ``fermi_floquet_shifted(x, drive, weights, kT)``.
    """
    x = np.asarray(x, dtype=float)
    if weights.n_max == 0:
        return fermi(x, kT)
    n = _sideband_orders(weights)
    if shifted is None:
        shifted = fermi(x[..., None] - n * drive.Omega, kT)
    out = np.sum(weights.j**2 * shifted, axis=-1)
    return float(out) if np.ndim(out) == 0 else out
