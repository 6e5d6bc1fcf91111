"""Two-block quantum master equation in the displaced-oscillator eigenbases.

State: a pair (rho0, rho1) of N x N complex blocks over the vibrational
eigenstates of the unoccupied and occupied diabatic wells. Level energies are
eps0(i) = omega*(i + 1/2) and eps1(i') = omega*(i' + 1/2) + Ed_bar, i.e. the
occupied ladder sits on the renormalized level. Block coupling is mediated by
the displaced-well overlaps F and by an electronic occupation factor
evaluated at the transition energy eps1 - eps0.

Two modes share one generator and differ only in the occupation factor:

* ``fqme``  - instantaneous sideband-dressed factor, complex, time periodic;
* ``faqme`` - cycle-averaged factor, real, time independent.

With the hop-in / hop-out weight matrices

    W[a, b]  = occ(eps1(a) - eps0(b))        (Toeplitz: depends on a - b)
    Z        = W * F^T        (elementwise)
    D        = F * (1 - W)^T  (elementwise)
    A0 = F Z,   A1 = F^T D

the equations of motion used below are

    d rho0/dt = -i[h0, rho0] - G/2 (A0 rho0 + rho0 A0^T)
                             + G/2 (F rho1 D^T + D rho1 F^T)
    d rho1/dt = -i[h1, rho1] - G/2 (A1 rho1 + rho1 A1^T)
                             + G/2 (F^T rho0 Z^T + Z rho0 F)

with G = Gamma/hbar and h0, h1 the diagonal ladder Hamiltonians. This is the
literal index form of the gain/loss terms contracted into matrix products;
the plain transpose (not the conjugate transpose) is intentional, so with a
complex occupation factor the blocks need not stay Hermitian. Trace is
conserved exactly for any W; Hermiticity and positivity are monitored, not
enforced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .floquet import FloquetWeights, bessel_weights, fermi, fermi_floquet_avg, fermi_floquet_t
from .franck_condon import fc_table
from .model import DriveParams, ModelParams

if TYPE_CHECKING:
    from .config import SimConfig

__all__ = [
    "DensityMatrixPair",
    "GeneratorTensors",
    "build_generators",
    "initial_state",
    "required_basis_size",
    "kinetic_matrix",
    "observables",
    "step",
    "run",
    "dt_ceiling",
]


@dataclass
class DensityMatrixPair:
    """Unoccupied / occupied blocks of the vibronic density matrix."""

    rho0: np.ndarray
    rho1: np.ndarray

    def __post_init__(self) -> None:
        r0 = np.asarray(self.rho0, dtype=complex)
        r1 = np.asarray(self.rho1, dtype=complex)
        if r0.shape != r1.shape or r0.ndim != 2 or r0.shape[0] != r0.shape[1]:
            raise ValueError(f"blocks must share a square shape, got {r0.shape} and {r1.shape}")
        self.rho0 = r0
        self.rho1 = r1

    @property
    def N(self) -> int:
        return self.rho0.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.rho0) + np.trace(self.rho1))

    def herm_defect(self) -> float:
        d0 = np.max(np.abs(self.rho0 - self.rho0.conj().T))
        d1 = np.max(np.abs(self.rho1 - self.rho1.conj().T))
        return float(max(d0, d1))

    def copy(self) -> "DensityMatrixPair":
        return DensityMatrixPair(self.rho0.copy(), self.rho1.copy())


@dataclass
class GeneratorTensors:
    """Precomputed pieces of the generator for a fixed basis size."""

    params: ModelParams
    N: int
    F: np.ndarray            # (N, N) displaced-well overlaps, rows = unoccupied
    eps0: np.ndarray         # (N,) unoccupied ladder
    eps1: np.ndarray         # (N,) occupied ladder
    ediff: np.ndarray        # (2N-1,) distinct transition energies eps1 - eps0
    didx: np.ndarray         # (N, N) index of ediff for the pair (a, b)
    _avg_cache: dict = field(default_factory=dict, repr=False)

    def weight_matrix(self, occ_values: np.ndarray) -> np.ndarray:
        """Expand occupation values on the energy-difference grid to (N, N)."""
        return occ_values[self.didx]


def build_generators(params: ModelParams, fc: np.ndarray | None = None, N: int | None = None) -> GeneratorTensors:
    """Assemble the generator tables for ``N`` vibrational levels per well."""
    if fc is None and N is None:
        raise ValueError("give either a precomputed overlap table or a basis size")
    if fc is None:
        fc = fc_table(N, params.lam)
    fc = np.asarray(fc, dtype=float)
    n = fc.shape[0]
    if N is not None and N != n:
        raise ValueError(f"overlap table size {n} does not match N={N}")
    idx = np.arange(n)
    eps0 = params.hbar * params.omega * (idx + 0.5)
    eps1 = eps0 + params.Ed_bar
    d = idx[:, None] - idx[None, :]          # a - b for the pair (eps1(a), eps0(b))
    ediff = params.omega * np.arange(-(n - 1), n) + params.Ed_bar
    didx = d + (n - 1)
    return GeneratorTensors(params=params, N=n, F=fc, eps0=eps0, eps1=eps1, ediff=ediff, didx=didx)


def _occupation_vector(gen: GeneratorTensors, t: float, mode: str, drive: DriveParams, weights: FloquetWeights) -> np.ndarray:
    """Occupation factor on the distinct transition energies."""
    if mode == "faqme":
        key = "avg_occ"
        if key not in gen._avg_cache:
            gen._avg_cache[key] = fermi_floquet_avg(gen.ediff, drive, weights, gen.params.kT_el).astype(complex)
        return gen._avg_cache[key]
    if mode == "fqme":
        return fermi_floquet_t(gen.ediff, t, drive, weights, gen.params.kT_el)
    raise ValueError(f"unknown mode {mode!r}, expected 'fqme' or 'faqme'")


def _rhs(gen: GeneratorTensors, rho0: np.ndarray, rho1: np.ndarray, W: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Generator action for one weight matrix W (complex or real)."""
    F = gen.F
    G = gen.params.Gamma / gen.params.hbar
    Z = W * F.T
    D = F * (1.0 - W).T
    A0 = F @ Z
    A1 = F.T @ D
    e0 = gen.eps0
    e1 = gen.eps1
    d0 = (-1j / gen.params.hbar) * (e0[:, None] - e0[None, :]) * rho0
    d0 += -(0.5 * G) * (A0 @ rho0 + rho0 @ A0.T)
    d0 += (0.5 * G) * (F @ (rho1 @ D.T) + D @ (rho1 @ F.T))
    d1 = (-1j / gen.params.hbar) * (e1[:, None] - e1[None, :]) * rho1
    d1 += -(0.5 * G) * (A1 @ rho1 + rho1 @ A1.T)
    d1 += (0.5 * G) * (F.T @ (rho0 @ Z.T) + Z @ (rho0 @ F))
    return d0, d1


def dt_ceiling(params: ModelParams, drive: DriveParams) -> float:
    """Largest allowed integrator step for the matrix propagator."""
    cap = 0.02 / max(params.Gamma, params.omega)
    if drive.A > 0:
        cap = min(cap, 0.05 * 2.0 * math.pi / drive.Omega)
    return cap


def step(
    gen: GeneratorTensors,
    state: DensityMatrixPair,
    t: float,
    dt: float,
    mode: str,
    drive: DriveParams,
    weights: FloquetWeights,
) -> DensityMatrixPair:
    """One fixed-step fourth-order Runge-Kutta update from t to t + dt.

    The occupation factor is evaluated at the substep times t, t + dt/2 and
    t + dt (a single shared midpoint evaluation for the two middle stages).
    """
    cap = dt_ceiling(gen.params, drive)
    if not 0 < dt <= cap * (1 + 1e-12):
        raise ValueError(f"dt={dt} outside (0, {cap:.6g}] for these parameters")
    w_lo = gen.weight_matrix(_occupation_vector(gen, t, mode, drive, weights))
    w_mid = gen.weight_matrix(_occupation_vector(gen, t + 0.5 * dt, mode, drive, weights))
    w_hi = gen.weight_matrix(_occupation_vector(gen, t + dt, mode, drive, weights))
    r0, r1 = state.rho0, state.rho1
    k1_0, k1_1 = _rhs(gen, r0, r1, w_lo)
    k2_0, k2_1 = _rhs(gen, r0 + 0.5 * dt * k1_0, r1 + 0.5 * dt * k1_1, w_mid)
    k3_0, k3_1 = _rhs(gen, r0 + 0.5 * dt * k2_0, r1 + 0.5 * dt * k2_1, w_mid)
    k4_0, k4_1 = _rhs(gen, r0 + dt * k3_0, r1 + dt * k3_1, w_hi)
    new0 = r0 + (dt / 6.0) * (k1_0 + 2.0 * (k2_0 + k3_0) + k4_0)
    new1 = r1 + (dt / 6.0) * (k1_1 + 2.0 * (k2_1 + k3_1) + k4_1)
    return DensityMatrixPair(new0, new1)


def required_basis_size(omega: float, kT: float, tail_tol: float = 1e-10, hbar: float = 1.0) -> int:
    """Smallest N whose first omitted thermal weight is below ``tail_tol``
    relative to the partition sum over the kept levels."""
    if not tail_tol > 0:
        raise ValueError("tail_tol must be positive")
    beta_w = hbar * omega / kT
    zsum = 0.0
    for n in range(1, 100000):
        zsum += math.exp(-beta_w * (n - 0.5))
        if math.exp(-beta_w * (n + 0.5)) < tail_tol * zsum:
            return n
    raise RuntimeError("no basis size satisfies the thermal tail bound")


def initial_state(
    params: ModelParams,
    N: int,
    kT_nuc0: float | None = None,
    tail_tol: float = 1e-10,
) -> DensityMatrixPair:
    """Thermal vibrational state in the unoccupied well, occupied block empty.

    Raises ValueError if ``N`` truncates the thermal ladder too early; the
    message reports the size that would be enough.
    """
    kT0 = params.kT_nuc0 if kT_nuc0 is None else kT_nuc0
    if not kT0 > 0:
        raise ValueError(f"initial nuclear temperature must be positive, got {kT0}")
    need = required_basis_size(params.omega, kT0, tail_tol, params.hbar)
    if N < need:
        raise ValueError(
            f"basis size {N} truncates the thermal state at kT={kT0} too early; "
            f"need at least N={need} for a relative tail below {tail_tol}"
        )
    eps = params.hbar * params.omega * (np.arange(N) + 0.5)
    w = np.exp(-(eps - eps[0]) / kT0)
    w /= w.sum()
    rho0 = np.diag(w).astype(complex)
    rho1 = np.zeros((N, N), dtype=complex)
    return DensityMatrixPair(rho0, rho1)


def kinetic_matrix(N: int, omega: float, mass: float = 1.0, hbar: float = 1.0) -> np.ndarray:
    """Kinetic energy operator p^2/(2m) in a harmonic eigenbasis.

    Identical in both wells because the displacement does not touch momenta.
    """
    k = np.zeros((N, N))
    i = np.arange(N)
    k[i, i] = (hbar * omega / 4.0) * (2 * i + 1)
    j = np.arange(N - 2)
    off = -(hbar * omega / 4.0) * np.sqrt((j + 1.0) * (j + 2.0))
    k[j, j + 2] = off
    k[j + 2, j] = off
    return k


def observables(state: DensityMatrixPair, kin: np.ndarray) -> tuple[float, float]:
    """(electronic population, nuclear kinetic energy) of the pair."""
    pop = float(np.trace(state.rho1).real)
    total = state.rho0 + state.rho1
    ekin = float(np.sum(total * kin.T).real)
    return pop, ekin


def run(config: "SimConfig"):
    """Propagate a matrix-method config and return (records, diagnostics).

    Records are row tuples matching the public time-series schema. The basis
    is enlarged beyond the configured size when the initial thermal state
    needs more levels.
    """
    from .timeseries import TimeSeriesRecord

    params = config.params
    drive = config.drive
    mode = {"FQME": "fqme", "FaQME": "faqme"}.get(config.method)
    if mode is None:
        raise ValueError(f"matrix propagator cannot run method {config.method!r}")
    N = max(config.basis_N, required_basis_size(params.omega, params.kT_nuc0))
    gen = build_generators(params, N=N)
    weights = bessel_weights(drive.z)
    state = initial_state(params, N)
    kin = kinetic_matrix(N, params.omega, params.mass, params.hbar)

    dt = config.dt if config.dt is not None else dt_ceiling(params, drive)
    n_steps = max(1, int(round(config.t_final / dt)))
    stride = config.output_stride

    records = []
    im_trace_max = 0.0
    herm_max = 0.0

    def snapshot(k: int, st: DensityMatrixPair) -> None:
        nonlocal im_trace_max, herm_max
        entries = np.concatenate([st.rho0.ravel(), st.rho1.ravel()])
        if not np.all(np.isfinite(entries.view(float))):
            mags = np.abs(entries)
            mx = float(np.max(mags[np.isfinite(mags)], initial=0.0))
            raise RuntimeError(f"non-finite density matrix at t={k * dt:.6g}, max|rho|={mx:.3e}")
        tr = st.trace()
        pop, ekin = observables(st, kin)
        herm = st.herm_defect()
        im_trace_max = max(im_trace_max, abs(tr.imag))
        herm_max = max(herm_max, herm)
        records.append(
            TimeSeriesRecord(
                t=k * dt, pop=pop, pop_err=0.0, ekin=ekin, ekin_err=0.0,
                trace_defect=abs(tr - 1.0), herm_defect=herm,
            )
        )

    snapshot(0, state)
    for k in range(1, n_steps + 1):
        t = (k - 1) * dt
        state = step(gen, state, t, dt, mode, drive, weights)
        tr = state.trace()
        if not (math.isfinite(tr.real) and math.isfinite(tr.imag)):
            mags = np.abs(np.concatenate([state.rho0.ravel(), state.rho1.ravel()]))
            mx = float(np.max(mags[np.isfinite(mags)], initial=0.0))
            raise RuntimeError(f"non-finite density matrix at t={k * dt:.6g}, max|rho|={mx:.3e}")
        if k % stride == 0 or k == n_steps:
            snapshot(k, state)

    diagnostics = {
        "basis_N": N,
        "dt": dt,
        "im_trace_max": im_trace_max,
        "herm_defect_max": herm_max,
        "mode": mode,
    }
    return records, diagnostics
