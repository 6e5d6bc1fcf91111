"""Shared fixtures for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

import floqhop as fh


@pytest.fixture
def relax_params() -> fh.ModelParams:
    """Undriven relaxation benchmark parameters (level well below the Fermi sea)."""
    return fh.ModelParams(Ed_bar=-2.0, g=0.75, omega=0.3, Gamma=1.0, kT_el=1.0, kT_nuc0=1.0)


@pytest.fixture
def cold_params() -> fh.ModelParams:
    """Same system at low temperature — small oscillator basis suffices."""
    return fh.ModelParams(Ed_bar=-2.0, g=0.75, omega=0.3, Gamma=1.0, kT_el=0.25, kT_nuc0=0.25)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)
