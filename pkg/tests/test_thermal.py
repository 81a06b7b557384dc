"""
Test Suite - Thermal States and Spectral Models
===============================================
Unit tests for Gibbs populations, transition matrices and the input models.
"""

import math

import numpy as np
import pytest

from otto_engine.spectra import EnergySpectrum, EngineSpec, ThermalState, Unitary, thermal_state, transition_matrix
from otto_engine.utils.errors import InvalidInputError

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


class TestThermalState:
    """Test cases for thermal_state."""

    def test_populations_sum_to_one(self):
        """Test that the populations sum to one."""
        state = thermal_state(EnergySpectrum(levels=(-1.3, 0.2, 0.9, 4.0)), 0.7)

        assert isinstance(state, ThermalState)
        assert math.fsum(state.weights) == pytest.approx(1.0, abs=1e-15)

    def test_boltzmann_ratios(self):
        """Test Boltzmann ratios and the partition function."""
        state = thermal_state(EnergySpectrum(levels=(-0.5, 0.5)), 2.0)

        assert state.weights[1] / state.weights[0] == pytest.approx(math.exp(-2.0))
        assert state.log_partition_function == pytest.approx(math.log(2.0 * math.cosh(1.0)))
        assert state.partition_function == pytest.approx(2.0 * math.cosh(1.0))

    def test_lower_levels_more_populated(self):
        """Test that lower levels are more populated."""
        state = thermal_state(EnergySpectrum(levels=(-2.0, -1.0, 0.5, 3.0)), 1.1)

        assert np.all(np.diff(state.populations) < 0)

    def test_large_beta_does_not_overflow(self):
        """Test a large inverse temperature without overflow."""
        state = thermal_state(EnergySpectrum(levels=(-1.0, 1.0)), 1e4)

        assert state.weights == (1.0, 0.0)
        assert state.log_partition_function == pytest.approx(1e4)
        assert math.isinf(state.partition_function)

    def test_degenerate_levels_share_weight(self):
        """Test that degenerate levels receive equal weights."""
        state = thermal_state(EnergySpectrum(levels=(0.0, 0.0, 1.0)), 0.3)

        assert state.weights[0] == state.weights[1]

    def test_near_zero_beta_is_uniform(self):
        """Test that a vanishing inverse temperature populates both levels equally."""
        state = thermal_state(EnergySpectrum(levels=(-1.0, 1.0)), 1e-12)

        np.testing.assert_allclose(state.populations, [0.5, 0.5], rtol=0, atol=1e-12)

    def test_three_level_populations_match_direct_sum(self):
        """Test three-level populations against an exactly summed Boltzmann table."""
        levels = (-0.7, 0.3, 1.1)
        terms = [math.exp(-2.0 * e) for e in levels]
        z = math.fsum(terms)
        state = thermal_state(EnergySpectrum(levels=levels), 2.0)

        np.testing.assert_allclose(state.populations, [t / z for t in terms], rtol=1e-14, atol=0)
        assert state.log_partition_function == pytest.approx(math.log(z), rel=1e-14)

    @pytest.mark.parametrize("beta", [0.0, -1.0, math.inf, math.nan])
    def test_invalid_beta(self, beta):
        """Test rejection of invalid inverse temperatures."""
        with pytest.raises(InvalidInputError):
            thermal_state(EnergySpectrum(levels=(-1.0, 1.0)), beta)


class TestTransitionMatrix:
    """Test cases for transition_matrix."""

    def test_identity_is_identity(self):
        """Test the transition matrix of the identity."""
        np.testing.assert_array_equal(transition_matrix(Unitary.identity(3)), np.eye(3))

    def test_hadamard_is_uniform(self):
        """Test the uniform transition matrix of a Hadamard gate."""
        np.testing.assert_allclose(transition_matrix(Unitary(entries=HADAMARD)), 0.5, atol=1e-15)

    def test_row_index_is_initial_level(self):
        """Test that rows index the initial level."""
        # U|0> = |1>: the stroke moves level 0 to level 1 with certainty
        shift = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        t = transition_matrix(Unitary(entries=shift))

        assert t[0, 1] == 1.0
        assert t[1, 2] == 1.0
        assert t[2, 0] == 1.0

    @pytest.mark.parametrize("seed", range(5))
    def test_doubly_stochastic(self, spec_factory, seed):
        """Test double stochasticity on random unitaries."""
        spec = spec_factory(4, seed)
        t = transition_matrix(spec.u_expansion)

        np.testing.assert_allclose(t.sum(axis=0), 1.0, atol=1e-12)
        np.testing.assert_allclose(t.sum(axis=1), 1.0, atol=1e-12)


class TestSpectralModels:
    """Test cases for the input models."""

    def test_spectrum_must_be_sorted(self):
        """Test rejection of an unsorted spectrum."""
        with pytest.raises(ValueError):
            EnergySpectrum(levels=(1.0, -1.0))

    def test_spectrum_must_be_finite(self):
        """Test rejection of a non-finite spectrum."""
        with pytest.raises(ValueError):
            EnergySpectrum(levels=(-1.0, math.nan))

    def test_non_unitary_rejected(self):
        """Test rejection of a non-unitary matrix."""
        with pytest.raises(ValueError):
            Unitary(entries=[[1.0, 0.1], [0.0, 1.0]])

    def test_non_square_rejected(self):
        """Test rejection of a non-square matrix."""
        with pytest.raises(ValueError):
            Unitary(entries=np.ones((2, 3)))

    def test_unitary_entries_read_only(self):
        """Test that unitary entries are read-only."""
        u = Unitary.identity(2)

        with pytest.raises(ValueError):
            u.entries[0, 0] = 2.0

    def test_dagger(self):
        """Test the adjoint."""
        u = Unitary(entries=1j * HADAMARD)

        np.testing.assert_allclose(u.dagger().entries @ u.entries, np.eye(2), atol=1e-15)

    def test_dimension_mismatch(self):
        """Test rejection of mismatched spectrum dimensions."""
        with pytest.raises(ValueError):
            EngineSpec(
                spectrum_start=EnergySpectrum(levels=(-1.0, 1.0)),
                spectrum_end=EnergySpectrum(levels=(-2.0, 0.0, 2.0)),
                u_expansion=Unitary.identity(2),
                u_compression=Unitary.identity(2),
                beta_cold=2.0,
                beta_hot=0.1,
            )

    def test_nonpositive_beta_rejected(self):
        """Test rejection of a non-positive inverse temperature."""
        with pytest.raises(ValueError):
            EngineSpec(
                spectrum_start=EnergySpectrum(levels=(-1.0, 1.0)),
                spectrum_end=EnergySpectrum(levels=(-2.0, 2.0)),
                u_expansion=Unitary.identity(2),
                u_compression=Unitary.identity(2),
                beta_cold=0.0,
                beta_hot=0.1,
            )

    def test_reversed_temperatures_allowed(self):
        """Test that swapped bath temperatures are accepted."""
        spec = EngineSpec(
            spectrum_start=EnergySpectrum(levels=(-1.0, 1.0)),
            spectrum_end=EnergySpectrum(levels=(-2.0, 2.0)),
            u_expansion=Unitary.identity(2),
            u_compression=Unitary.identity(2),
            beta_cold=0.1,
            beta_hot=2.0,
        )

        assert spec.dimension == 2
