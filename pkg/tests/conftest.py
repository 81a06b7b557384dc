"""
Test Suite Configuration
========================
Pytest configuration and fixtures for all tests.
"""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

# Set test environment variables before settings are first read
os.environ["OTTO_LOG_LEVEL"] = "WARNING"  # Reduce log noise during tests
os.environ.pop("OTTO_GROUPING_TOL", None)
os.environ.pop("OTTO_STEPS_PER_UNIT", None)

CONFIG_DIR = project_root / "configs"

# Exact adiabatic stroke duration 8 pi / (gamma1 + gamma2) of the demonstration engine
ADIABATIC_TAU = 7.180783208205241
NONADIABATIC_TAU = 2.39


def random_unitary(dimension: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like unitary from the QR decomposition of a complex Gaussian matrix."""
    z = rng.normal(size=(dimension, dimension)) + 1j * rng.normal(size=(dimension, dimension))
    q, r = np.linalg.qr(z)
    diagonal = np.diag(r)
    return q * (diagonal / np.abs(diagonal))


def random_engine_spec(dimension: int, seed: int):
    """Engine with random ascending spectra, random unitaries and beta_cold > beta_hot."""
    from otto_engine.spectra import EnergySpectrum, EngineSpec, Unitary

    rng = np.random.default_rng(seed)
    start = np.sort(rng.normal(size=dimension))
    end = np.sort(rng.normal(scale=2.0, size=dimension))
    return EngineSpec(
        spectrum_start=EnergySpectrum(levels=tuple(float(e) for e in start)),
        spectrum_end=EnergySpectrum(levels=tuple(float(e) for e in end)),
        u_expansion=Unitary(entries=random_unitary(dimension, rng)),
        u_compression=Unitary(entries=random_unitary(dimension, rng)),
        beta_cold=float(rng.uniform(1.0, 3.0)),
        beta_hot=float(rng.uniform(0.05, 0.9)),
    )


def identity_engine_spec(a: float = 1.0, b: float = 2.0, beta_cold: float = 2.0, beta_hot: float = 0.1):
    """Two-level engine with levels (-a, a) -> (-b, b) and trivial strokes."""
    from otto_engine.spectra import EnergySpectrum, EngineSpec, Unitary

    return EngineSpec(
        spectrum_start=EnergySpectrum(levels=(-a, a)),
        spectrum_end=EnergySpectrum(levels=(-b, b)),
        u_expansion=Unitary.identity(2),
        u_compression=Unitary.identity(2),
        beta_cold=beta_cold,
        beta_hot=beta_hot,
    )


@pytest.fixture
def nonadiabatic_params():
    """Demonstration engine driven in 2.39 time units."""
    from otto_engine.twolevel import TwoLevelParams

    return TwoLevelParams(gamma1=0.5, gamma2=3.0, tau=NONADIABATIC_TAU, beta1=2.0, beta2=0.1)


@pytest.fixture
def adiabatic_params():
    """Demonstration engine at the exact adiabatic stroke duration."""
    from otto_engine.twolevel import TwoLevelParams

    return TwoLevelParams(gamma1=0.5, gamma2=3.0, tau=ADIABATIC_TAU, beta1=2.0, beta2=0.1)


@pytest.fixture
def identity_spec():
    return identity_engine_spec()


@pytest.fixture
def spec_factory():
    """Factory for random engine specs: spec_factory(dimension, seed)."""
    return random_engine_spec


# Markers for test categories
def pytest_configure(config):
    """Configure custom markers."""
    config.addinivalue_line(
        "markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')"
    )
    config.addinivalue_line(
        "markers", "integration: marks tests as integration tests"
    )
    config.addinivalue_line(
        "markers", "unit: marks tests as unit tests"
    )
