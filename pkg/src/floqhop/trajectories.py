"""Stochastic surface hopping on the two diabatic wells.

Three flavors share one loop and differ only in how the electronic
occupation factor enters:

* ``FSH``          - hops drawn from the instantaneous sideband-dressed
                     factor (real positive part of the complex rate);
* ``FaSH``         - hops drawn from the cycle-averaged factor;
* ``FaSH-density`` - hops as FaSH, plus a per-trajectory two-level density
                     (P0, P1) propagated with the instantaneous complex
                     rates; the reported population is mean Re P1.

Randomness: every trajectory owns a counter-based stream keyed by
(master_seed, trajectory_index), so any trajectory can be replayed alone and
the ensemble result is bitwise independent of how work is split across
workers. Each stream is consumed in a fixed order: two normals for the
initial condition, then one uniform per time step.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .floquet import (
    FloquetWeights,
    bessel_weights,
    fermi_floquet_avg,
    fermi_floquet_shifted,
    fermi_floquet_t,
)
from .model import DriveParams, ModelParams, gap

if TYPE_CHECKING:
    from .config import SimConfig

__all__ = [
    "EnsembleResult",
    "sample_initial",
    "verlet_step",
    "hop_rates",
    "attempt_hop",
    "propagate_density",
    "run_ensemble",
    "default_dt",
    "THREADS_ENV",
]

THREADS_ENV = "FLOQUET_HOP_THREADS"

# fixed batch width: work is split into these slices no matter how many
# workers run them, which keeps the reduction order fixed
_BATCH = 4096
_CHUNK = 256          # uniforms drawn per stream per refill
_ABORT_FRACTION = 1e-3

_TRAJ_METHODS = ("FSH", "FaSH", "FaSH-density")


@dataclass
class EnsembleResult:
    """Ensemble averages on the checkpoint grid plus run accounting."""

    method: str
    t: np.ndarray
    pop: np.ndarray
    pop_err: np.ndarray
    ekin: np.ndarray
    ekin_err: np.ndarray
    defect_t: np.ndarray          # max |P0 + P1 - 1| per checkpoint (density flavor)
    im_pop_t: np.ndarray          # |mean Im P1| per checkpoint (density flavor)
    n_traj: int
    n_aborted: int
    total_hops: int
    density_sum_defect: float     # max of defect_t
    im_pop_max: float             # max of im_pop_t
    rate_dt_max: float            # largest Re(rate)*dt encountered


def _stream(master_seed: int, index: int) -> np.random.Generator:
    key = np.array([master_seed, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_initial(params: ModelParams, n_traj: int, master_seed: int, indices: np.ndarray | None = None):
    """Thermal positions and momenta in the unoccupied well.

    x ~ N(0, kT0/(m omega^2)), p ~ N(0, m kT0), one (x, p) pair per
    trajectory stream.
    """
    if indices is None:
        indices = np.arange(n_traj)
    sig_x = math.sqrt(params.kT_nuc0 / params.mass) / params.omega
    sig_p = math.sqrt(params.mass * params.kT_nuc0)
    x = np.empty(len(indices))
    p = np.empty(len(indices))
    for row, idx in enumerate(indices):
        z = _stream(master_seed, int(idx)).standard_normal(2)
        x[row] = sig_x * z[0]
        p[row] = sig_p * z[1]
    return x, p


def verlet_step(params: ModelParams, x, p, surface, dt: float):
    """Velocity Verlet on the active diabatic surface (vectorized).

    The two surfaces share curvature, so the force is the harmonic pull plus
    a constant shift on the occupied surface.
    """
    slope = math.sqrt(2.0 * params.mass * params.omega / params.hbar) * params.g
    mw2 = params.mass * params.omega**2
    f_now = -mw2 * x - surface * slope
    p_half = p + 0.5 * dt * f_now
    x_new = x + dt * p_half / params.mass
    f_new = -mw2 * x_new - surface * slope
    p_new = p_half + 0.5 * dt * f_new
    return x_new, p_new


def hop_rates(
    params: ModelParams,
    drive: DriveParams,
    weights: FloquetWeights,
    x,
    t: float,
    averaged: bool,
    shifted: np.ndarray | None = None,
):
    """Upward and downward hopping rates at the current gap (complex pair).

    gamma01 drives 0 -> 1 and is Gamma/hbar times the occupation factor at
    the local gap; gamma10 is built as Gamma/hbar - gamma01 so the pair sums
    to Gamma/hbar identically. ``shifted`` optionally carries the
    position-only sideband table for the same ``x`` so repeated evaluations
    at different times skip rebuilding it.
    """
    dv = gap(params, x)
    scale = params.Gamma / params.hbar
    if averaged:
        occ = fermi_floquet_avg(dv, drive, weights, params.kT_el, shifted=shifted).astype(complex)
    else:
        occ = np.asarray(
            fermi_floquet_t(dv, t, drive, weights, params.kT_el, shifted=shifted), dtype=complex
        )
    g01 = scale * occ
    g10 = scale - g01
    return g01, g10


def attempt_hop(surface, g01, g10, dt: float, xi):
    """Stochastic surface flips from first-order hop probabilities.

    The probability is Re(rate)*dt clipped below at zero; momenta are left
    untouched on a hop.
    """
    p_up = np.clip(np.real(g01), 0.0, None) * dt
    p_dn = np.clip(np.real(g10), 0.0, None) * dt
    want = np.where(surface == 0, p_up, p_dn)
    flips = xi < want
    return np.where(flips, 1 - surface, surface), flips


def propagate_density(
    params: ModelParams,
    drive: DriveParams,
    weights: FloquetWeights,
    P0,
    P1,
    x,
    t: float,
    dt: float,
    shifted: np.ndarray | None = None,
):
    """Runge-Kutta update of the per-trajectory two-level density over
    [t, t + dt] at frozen position, instantaneous complex rates.

    dP0/dt = -g01 P0 + g10 P1 and dP1/dt = +g01 P0 - g10 P1, so P0 + P1 is
    conserved stage by stage. The position-only sideband table is shared by
    the three stage times (and may be passed in precomputed).
    """
    if shifted is None and weights.n_max > 0:
        shifted = fermi_floquet_shifted(gap(params, x), drive, weights, params.kT_el)
    g01_lo, g10_lo = hop_rates(params, drive, weights, x, t, averaged=False, shifted=shifted)
    g01_mid, g10_mid = hop_rates(params, drive, weights, x, t + 0.5 * dt, averaged=False, shifted=shifted)
    g01_hi, g10_hi = hop_rates(params, drive, weights, x, t + dt, averaged=False, shifted=shifted)

    def rhs(p0, p1, g01, g10):
        flow = g01 * p0 - g10 * p1
        return -flow, flow

    k1_0, k1_1 = rhs(P0, P1, g01_lo, g10_lo)
    k2_0, k2_1 = rhs(P0 + 0.5 * dt * k1_0, P1 + 0.5 * dt * k1_1, g01_mid, g10_mid)
    k3_0, k3_1 = rhs(P0 + 0.5 * dt * k2_0, P1 + 0.5 * dt * k2_1, g01_mid, g10_mid)
    k4_0, k4_1 = rhs(P0 + dt * k3_0, P1 + dt * k3_1, g01_hi, g10_hi)
    new0 = P0 + (dt / 6.0) * (k1_0 + 2.0 * (k2_0 + k3_0) + k4_0)
    new1 = P1 + (dt / 6.0) * (k1_1 + 2.0 * (k2_1 + k3_1) + k4_1)
    return new0, new1


def default_dt(drive: DriveParams) -> float:
    """Default trajectory step, shrunk when the drive period is short."""
    dt = 0.01
    if drive.A > 0:
        dt = min(dt, 0.02 * 2.0 * math.pi / drive.Omega)
    return dt


def _rate_bound(params: ModelParams, weights: FloquetWeights) -> float:
    # |occ| <= sum |J_m|, so Re(gamma10) <= Gamma (1 + sum |J_m|)
    j_abs = float(np.sum(np.abs(weights.j)))
    return params.Gamma / params.hbar * (1.0 + max(j_abs, 1.0))


def _worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    if n < 0:
        raise ValueError(f"{THREADS_ENV} must be non-negative, got {n}")
    if n == 0:
        return min(os.cpu_count() or 1, 8)
    return n


@dataclass
class _BatchOut:
    s_pop: np.ndarray
    s_pop2: np.ndarray
    s_ekin: np.ndarray
    s_ekin2: np.ndarray
    n_alive: np.ndarray
    hops: int
    aborted: int
    defect_max: np.ndarray
    im_pop_sum: np.ndarray
    rate_dt_max: float
    dump: dict | None


def _run_batch(
    config: "SimConfig",
    weights: FloquetWeights,
    indices: np.ndarray,
    n_steps: int,
    check_steps: np.ndarray,
    want_dump: bool,
) -> _BatchOut:
    params = config.params
    drive = config.drive
    method = config.method
    dt = config.dt if config.dt is not None else default_dt(drive)
    density = method == "FaSH-density"
    averaged_hops = method in ("FaSH", "FaSH-density")

    nb = len(indices)
    gens = [_stream(config.master_seed, int(i)) for i in indices]
    x = np.empty(nb)
    p = np.empty(nb)
    sig_x = math.sqrt(params.kT_nuc0 / params.mass) / params.omega
    sig_p = math.sqrt(params.mass * params.kT_nuc0)
    for row, g in enumerate(gens):
        z = g.standard_normal(2)
        x[row] = sig_x * z[0]
        p[row] = sig_p * z[1]
    surface = np.zeros(nb, dtype=np.int64)
    alive = np.ones(nb, dtype=bool)
    if density:
        P0 = np.ones(nb, dtype=complex)
        P1 = np.zeros(nb, dtype=complex)

    n_check = len(check_steps)
    out = _BatchOut(
        s_pop=np.zeros(n_check), s_pop2=np.zeros(n_check),
        s_ekin=np.zeros(n_check), s_ekin2=np.zeros(n_check),
        n_alive=np.zeros(n_check, dtype=np.int64), hops=0, aborted=0,
        defect_max=np.zeros(n_check), im_pop_sum=np.zeros(n_check),
        rate_dt_max=0.0, dump=None,
    )
    dump = None
    if want_dump:
        dump = {"x": [], "p": [], "surface": [], "re_p1": []}

    check_pos = {int(s): i for i, s in enumerate(check_steps)}

    def record(step_index: int) -> None:
        slot = check_pos.get(step_index)
        if slot is None:
            return
        ok = alive & np.isfinite(x) & np.isfinite(p)
        newly_dead = alive & ~ok
        if np.any(newly_dead):
            out.aborted += int(np.count_nonzero(newly_dead))
            alive[newly_dead] = False
        if density:
            val = np.real(P1)
            defect = np.abs(P0 + P1 - 1.0)
            if np.any(ok):
                out.defect_max[slot] = float(np.max(defect[ok]))
                out.im_pop_sum[slot] = float(np.sum(np.imag(P1)[ok]))
        else:
            val = surface.astype(float)
        ekin = 0.5 * p * p / params.mass
        out.s_pop[slot] = float(np.sum(val[ok]))
        out.s_pop2[slot] = float(np.sum(val[ok] ** 2))
        out.s_ekin[slot] = float(np.sum(ekin[ok]))
        out.s_ekin2[slot] = float(np.sum(ekin[ok] ** 2))
        out.n_alive[slot] = int(np.count_nonzero(ok))
        if dump is not None:
            dump["x"].append(x.copy())
            dump["p"].append(p.copy())
            dump["surface"].append(surface.copy())
            dump["re_p1"].append(np.real(P1).copy() if density else np.zeros(nb))

    record(0)
    uniforms = None
    offset = 0
    for k in range(1, n_steps + 1):
        if uniforms is None or offset >= uniforms.shape[1]:
            width = min(_CHUNK, n_steps - (k - 1))
            uniforms = np.empty((nb, width))
            for row, g in enumerate(gens):
                uniforms[row] = g.random(width)
            offset = 0
        t_prev = (k - 1) * dt
        t_new = k * dt
        x, p = verlet_step(params, x, p, surface, dt)
        # position-only sideband table, shared by the hop test and all
        # density stage times within this step
        shared = None
        if weights.n_max > 0:
            shared = fermi_floquet_shifted(gap(params, x), drive, weights, params.kT_el)
        g01, g10 = hop_rates(params, drive, weights, x, t_new, averaged=averaged_hops, shifted=shared)
        # fmax skips NaN from aborted trajectories
        step_max = float(np.fmax.reduce(np.fmax(np.real(g01), np.real(g10)))) * dt
        if step_max > out.rate_dt_max:
            out.rate_dt_max = step_max
        surface, flips = attempt_hop(surface, g01, g10, dt, uniforms[:, offset])
        out.hops += int(np.count_nonzero(flips & alive))
        if density:
            P0, P1 = propagate_density(params, drive, weights, P0, P1, x, t_prev, dt, shifted=shared)
        offset += 1
        record(k)

    out.dump = dump
    return out


def run_ensemble(config: "SimConfig", dump_path: str | None = None) -> EnsembleResult:
    """Propagate the full ensemble and reduce it on the checkpoint grid.

    Batches of fixed width are distributed over a thread pool sized by the
    FLOQUET_HOP_THREADS environment variable (0 or unset picks a machine
    default); results are reduced in batch order, so the outcome is bitwise
    identical for any worker count. An optional dump stores the first batch
    worth of per-trajectory snapshots for debugging.
    """
    params = config.params
    drive = config.drive
    if config.method not in _TRAJ_METHODS:
        raise ValueError(f"trajectory engine cannot run method {config.method!r}")
    if config.n_traj < 100:
        raise ValueError(f"need at least 100 trajectories, got {config.n_traj}")
    dt = config.dt if config.dt is not None else default_dt(drive)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    weights = bessel_weights(drive.z)
    bound = _rate_bound(params, weights) * dt
    if bound >= 0.1:
        raise ValueError(
            f"hop probability bound Re(rate)*dt = {bound:.3g} >= 0.1; "
            f"reduce dt below {0.1 / _rate_bound(params, weights):.3g}"
        )
    n_steps = max(1, int(round(config.t_final / dt)))
    stride = config.output_stride
    check_steps = np.arange(0, n_steps + 1, stride)
    if check_steps[-1] != n_steps:
        check_steps = np.append(check_steps, n_steps)

    starts = np.arange(0, config.n_traj, _BATCH)
    batches = [np.arange(s, min(s + _BATCH, config.n_traj)) for s in starts]

    def job(bi: int) -> _BatchOut:
        return _run_batch(config, weights, batches[bi], n_steps, check_steps, want_dump=(bi == 0 and dump_path is not None))

    n_workers = _worker_count()
    if n_workers == 1 or len(batches) == 1:
        outs = [job(i) for i in range(len(batches))]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            outs = list(pool.map(job, range(len(batches))))

    n_check = len(check_steps)
    s_pop = np.zeros(n_check)
    s_pop2 = np.zeros(n_check)
    s_ekin = np.zeros(n_check)
    s_ekin2 = np.zeros(n_check)
    n_alive = np.zeros(n_check, dtype=np.int64)
    im_pop = np.zeros(n_check)
    defect_t = np.zeros(n_check)
    hops = 0
    aborted = 0
    rate_dt_max = 0.0
    for o in outs:
        s_pop += o.s_pop
        s_pop2 += o.s_pop2
        s_ekin += o.s_ekin
        s_ekin2 += o.s_ekin2
        n_alive += o.n_alive
        im_pop += o.im_pop_sum
        defect_t = np.maximum(defect_t, o.defect_max)
        hops += o.hops
        aborted += o.aborted
        rate_dt_max = max(rate_dt_max, o.rate_dt_max)

    if aborted > _ABORT_FRACTION * config.n_traj:
        raise RuntimeError(
            f"{aborted} of {config.n_traj} trajectories aborted "
            f"(limit {_ABORT_FRACTION:.1%}); refusing to report averages"
        )

    n = np.maximum(n_alive, 1)
    pop = s_pop / n
    ekin = s_ekin / n
    var_pop = np.maximum(s_pop2 / n - pop**2, 0.0)
    var_ek = np.maximum(s_ekin2 / n - ekin**2, 0.0)
    nm1 = np.maximum(n - 1, 1)
    pop_err = np.sqrt(var_pop * n / nm1 / n)
    ekin_err = np.sqrt(var_ek * n / nm1 / n)

    if dump_path is not None and outs and outs[0].dump is not None:
        d = outs[0].dump
        np.savez_compressed(
            dump_path,
            t=check_steps * dt,
            x=np.array(d["x"]),
            p=np.array(d["p"]),
            surface=np.array(d["surface"]),
            re_p1=np.array(d["re_p1"]),
            indices=batches[0],
        )

    im_pop_t = np.abs(im_pop / n)
    return EnsembleResult(
        method=config.method,
        t=check_steps * dt,
        pop=pop,
        pop_err=pop_err,
        ekin=ekin,
        ekin_err=ekin_err,
        defect_t=defect_t,
        im_pop_t=im_pop_t,
        n_traj=config.n_traj,
        n_aborted=aborted,
        total_hops=hops,
        density_sum_defect=float(np.max(defect_t)) if n_check else 0.0,
        im_pop_max=float(np.max(im_pop_t)) if n_check else 0.0,
        rate_dt_max=rate_dt_max,
    )
