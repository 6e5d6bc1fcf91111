"""Floquet master equation and surface hopping for a driven impurity level
coupled to one phonon and a metal surface."""

from .config import METHODS, ConfigError, SimConfig, parse_config
from .floquet import FloquetWeights, bessel_weights, drive_phase, fermi, fermi_floquet_avg, fermi_floquet_t
from .franck_condon import fc_factor, fc_table
from .fqme import (
    DensityMatrixPair,
    GeneratorTensors,
    build_generators,
    initial_state,
    kinetic_matrix,
    observables,
    required_basis_size,
)
from .model import DriveParams, ModelParams, bare_level, force, gap, potential, renormalized_level
from .presets import FIGURE_PRESETS
from .timeseries import (
    HEADER,
    SteadySummary,
    TimeSeriesRecord,
    read_series,
    records_from_ensemble,
    steady_state_summary,
    write_series,
)
from .trajectories import (
    EnsembleResult,
    attempt_hop,
    hop_rates,
    propagate_density,
    run_ensemble,
    sample_initial,
    verlet_step,
)

__version__ = "0.1.0"

__all__ = [
    "METHODS",
    "ConfigError",
    "SimConfig",
    "parse_config",
    "FloquetWeights",
    "bessel_weights",
    "drive_phase",
    "fermi",
    "fermi_floquet_avg",
    "fermi_floquet_t",
    "fc_factor",
    "fc_table",
    "DensityMatrixPair",
    "GeneratorTensors",
    "build_generators",
    "initial_state",
    "kinetic_matrix",
    "observables",
    "required_basis_size",
    "DriveParams",
    "ModelParams",
    "bare_level",
    "force",
    "gap",
    "potential",
    "renormalized_level",
    "FIGURE_PRESETS",
    "HEADER",
    "SteadySummary",
    "TimeSeriesRecord",
    "read_series",
    "records_from_ensemble",
    "steady_state_summary",
    "write_series",
    "EnsembleResult",
    "attempt_hop",
    "hop_rates",
    "propagate_density",
    "run_ensemble",
    "sample_initial",
    "verlet_step",
]
