"""Overlap factors between the eigenstates of two displaced harmonic wells.

The two wells share the same frequency and are displaced by sqrt(2)*lam in
oscillator-length units, where lam = g/omega. The overlap of level i in the
undisplaced well with level ip in the displaced well is the closed form

    F[i -> ip] = sqrt(p!/Q!) lam^(Q-p) exp(-lam^2/2) L_p^(Q-p)(lam^2) * s

with p = min(i, ip), Q = max(i, ip), generalized Laguerre L and the sign
s = sgn(ip - i)^(i - ip). Factorial ratios go through log-gamma so large
indices do not overflow.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

__all__ = ["fc_factor", "fc_table", "MAX_LEVEL"]

# generalized Laguerre recurrences lose float64 accuracy past here
MAX_LEVEL = 170


def _check_levels(i: int, ip: int) -> None:
    if i < 0 or ip < 0:
        raise ValueError(f"levels must be non-negative, got ({i}, {ip})")
    if max(i, ip) > MAX_LEVEL:
        raise ValueError(
            f"level {max(i, ip)} beyond {MAX_LEVEL}: overlap evaluation loses "
            "precision, refuse to continue"
        )


def fc_factor(i: int, ip: int, lam: float) -> float:
    """Single displaced-well overlap F[i -> ip] at displacement parameter lam."""
    _check_levels(i, ip)
    if lam < 0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    if lam == 0.0:
        return 1.0 if i == ip else 0.0
    p, q = min(i, ip), max(i, ip)
    d = q - p
    log_mag = 0.5 * (special.gammaln(p + 1) - special.gammaln(q + 1))
    log_mag += d * math.log(lam) - 0.5 * lam * lam
    lag = special.eval_genlaguerre(p, d, lam * lam)
    sign = -1.0 if (ip < i and (i - ip) % 2 == 1) else 1.0
    return float(sign * math.exp(log_mag) * lag)


def fc_table(N: int, lam: float) -> np.ndarray:
    """Dense (N, N) table with entry [i, ip] = F[i -> ip].

    Rows index the undisplaced well, columns the displaced well.
    """
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    _check_levels(N - 1, N - 1)
    if lam < 0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    if lam == 0.0:
        return np.eye(N)
    idx = np.arange(N)
    i = idx[:, None]
    ip = idx[None, :]
    p = np.minimum(i, ip)
    q = np.maximum(i, ip)
    d = q - p
    log_mag = 0.5 * (special.gammaln(p + 1) - special.gammaln(q + 1))
    log_mag = log_mag + d * math.log(lam) - 0.5 * lam * lam
    lag = special.eval_genlaguerre(p, d, lam * lam)
    sign = np.where((ip < i) & ((i - ip) % 2 == 1), -1.0, 1.0)
    return sign * np.exp(log_mag) * lag
