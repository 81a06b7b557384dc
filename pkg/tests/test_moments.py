"""
Test Suite - Moments and Engine Diagnostics
===========================================
Unit tests for mean energetics, the thermodynamic efficiency, engine
conditions, efficiency moments and the heat/efficiency covariance.
"""

import math

import pytest
from scipy.special import expit

from otto_engine.spectra import (
    carnot_efficiency,
    efficiency_distribution,
    efficiency_heat_covariance,
    efficiency_moments,
    engine_conditions,
    joint_distribution,
    mean_heat2,
    mean_work1,
    mean_work3,
    thermodynamic_efficiency,
)
from otto_engine.twolevel import TwoLevelParams, build_engine_spec, derive
from otto_engine.utils.errors import InvalidInputError, UndefinedResultError
from tests.conftest import ADIABATIC_TAU, identity_engine_spec


def _crossed(x: float, y: float) -> float:
    return expit(2 * x) * expit(-2 * y) + expit(-2 * x) * expit(2 * y)


class TestMeanEnergetics:
    """Test cases for the mean work and heat."""

    def test_trivial_stroke_means(self, identity_spec):
        """Test the mean work and heat of trivial strokes."""
        # levels (-1, 1) -> (-2, 2), beta_cold = 2, beta_hot = 0.1
        t_cold, t_hot = math.tanh(2.0), math.tanh(0.2)

        assert mean_work1(identity_spec) == pytest.approx(-(2.0 - 1.0) * t_cold, abs=1e-14)
        assert mean_work3(identity_spec) == pytest.approx((2.0 - 1.0) * t_hot, abs=1e-14)
        assert mean_heat2(identity_spec) == pytest.approx(2.0 * (t_cold - t_hot), abs=1e-14)

    def test_otto_efficiency_for_trivial_strokes(self, identity_spec):
        """Test that trivial strokes reach the Otto efficiency."""
        assert thermodynamic_efficiency(identity_spec) == pytest.approx(0.5, abs=1e-14)

    def test_undefined_without_heat(self):
        """Test the undefined efficiency when no heat flows."""
        # equal bath temperatures and equal gaps: no heat flows on average
        spec = identity_engine_spec(a=1.0, b=1.0, beta_cold=1.0, beta_hot=1.0)

        with pytest.raises(UndefinedResultError):
            thermodynamic_efficiency(spec)

    def test_carnot(self):
        """Test the Carnot efficiency."""
        assert carnot_efficiency(2.0, 0.1) == pytest.approx(0.95)
        with pytest.raises(InvalidInputError):
            carnot_efficiency(0.0, 1.0)


class TestEngineConditions:
    """Test cases for engine_conditions."""

    def test_trivial_strokes_run_as_engine(self, identity_spec):
        """Test that trivial strokes run as an engine."""
        conditions = engine_conditions(identity_spec)

        assert conditions.heat_in_positive
        assert conditions.work_out_positive
        assert conditions.is_engine

    def test_reversed_baths_do_not(self):
        """Test that swapped baths do not run as an engine."""
        conditions = engine_conditions(identity_engine_spec(beta_cold=0.1, beta_hot=2.0))

        assert not conditions.is_engine
        assert conditions.mean_heat2 < 0

    def test_full_swap_is_not_an_engine(self):
        """Test that a stroke swapping the spin levels draws no heat from the hot bath."""
        params = TwoLevelParams(gamma1=0.5, gamma2=3.0, tau=math.pi / 3.5, beta1=2.0, beta2=0.1)
        conditions = engine_conditions(build_engine_spec(params))

        assert derive(params).a_star == pytest.approx(1.0, abs=1e-12)
        assert not conditions.heat_in_positive
        assert not conditions.is_engine

    def test_equal_baths_yield_no_work(self):
        """Test that equal bath temperatures give no positive work output on adiabatic strokes."""
        params = TwoLevelParams(gamma1=0.5, gamma2=3.0, tau=ADIABATIC_TAU, beta1=1.0, beta2=1.0)
        conditions = engine_conditions(build_engine_spec(params))

        assert not conditions.work_out_positive
        assert not conditions.is_engine

    def test_adiabatic_point_is_an_engine(self, adiabatic_params):
        """Test that the adiabatic working point runs as an engine."""
        conditions = engine_conditions(build_engine_spec(adiabatic_params))

        assert conditions.heat_in_positive
        assert conditions.work_out_positive
        assert conditions.is_engine


class TestEfficiencyMoments:
    """Test cases for efficiency_moments."""

    def test_defined_without_infinities(self, identity_spec):
        """Test moments of a distribution without infinite atoms."""
        moments = efficiency_moments(efficiency_distribution(joint_distribution(identity_spec)))
        p = _crossed(2.0, 0.2)

        assert moments.defined
        assert moments.mean == pytest.approx(0.5 * p, abs=1e-14)
        assert moments.variance == pytest.approx(0.25 * p * (1.0 - p), abs=1e-14)
        assert moments.infinity_mass == 0.0

    def test_undefined_with_infinities(self, nonadiabatic_params):
        """Test that infinite atoms leave the moments undefined."""
        dist = efficiency_distribution(joint_distribution(build_engine_spec(nonadiabatic_params)))
        moments = efficiency_moments(dist)

        assert dist.infinity_mass > 1e-3
        assert not moments.defined
        assert moments.mean is None
        assert moments.variance is None

    def test_threshold_is_configurable(self, nonadiabatic_params):
        """Test a custom infinity threshold."""
        dist = efficiency_distribution(joint_distribution(build_engine_spec(nonadiabatic_params)))

        assert efficiency_moments(dist, threshold=1.0).defined


class TestCovariance:
    """Test cases for efficiency_heat_covariance."""

    def test_identity_holds_for_trivial_strokes(self, identity_spec):
        """Test the mean efficiency identity for trivial strokes."""
        joint = joint_distribution(identity_spec)
        report = efficiency_heat_covariance(joint)
        mean_eta = efficiency_moments(efficiency_distribution(joint)).mean
        eta_th = thermodynamic_efficiency(identity_spec)

        assert report.defined
        assert report.identity_residual < 1e-12
        assert mean_eta == pytest.approx(eta_th - report.cov / joint.expectation("q2"), abs=1e-12)

    def test_positive_correlation_in_engine_regime(self, identity_spec):
        """Test a positive covariance in the engine regime."""
        report = efficiency_heat_covariance(joint_distribution(identity_spec))

        assert report.cov > 0

    def test_undefined_with_infinities(self, nonadiabatic_params):
        """Test that infinite atoms leave the covariance undefined."""
        report = efficiency_heat_covariance(joint_distribution(build_engine_spec(nonadiabatic_params)))

        assert not report.defined
        assert report.cov is None
