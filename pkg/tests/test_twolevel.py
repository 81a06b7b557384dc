"""
Test Suite - Analytic Two-Level Engine
======================================
Unit tests for the closed-form spin engine, checked against the generic
enumeration wherever both exist.
"""

import itertools
import math

import numpy as np
import pytest
from scipy.special import expit

from otto_engine.cli.commands import distribution_residual, sweep_beta_rows
from otto_engine.cli.config import load_config
from otto_engine.propagator import expansion_protocol
from otto_engine.spectra import (
    efficiency_distribution,
    efficiency_heat_covariance,
    efficiency_moments,
    engine_conditions,
    joint_distribution,
    thermodynamic_efficiency,
    transition_matrix,
)
from otto_engine.twolevel import (
    TwoLevelParams,
    adiabatic_mean,
    adiabatic_mean_limits,
    adiabatic_tau,
    adiabatic_variance,
    adiabatic_variance_limits,
    build_engine_spec,
    closed_form_unitary,
    compression_unitary,
    covariance_closed,
    derive,
    efficiency_distribution_closed,
    engine_bounds,
    engine_margin,
    engine_window_edges,
    eta_th,
    i_integral,
    is_adiabatic,
    mean_energetics,
    nearest_adiabatic_tau,
)
from otto_engine.utils.errors import InvalidInputError, PreconditionError
from otto_engine.utils.validators import unitarity_residual
from tests.conftest import ADIABATIC_TAU, CONFIG_DIR

TAU_SAMPLE = [0.5, 1.0, 1.7, 2.39, 3.3, 4.6, 5.2, 6.0, ADIABATIC_TAU, 8.4, 9.9]
TAU_GRID = np.linspace(0.5, 10.0, 51).tolist()

# beta2 = beta1 / ratio, the ratios cycling through engine and non-engine points
ADIABATIC_BETAS = [
    (float(b), float(b) / r) for b, r in zip(np.geomspace(0.05, 30.0, 20), itertools.cycle((10.0, 3.0, 1.5, 6.0)))
]
HIGH_T_BETAS = [(1e-4, 1e-5), (5e-5, 1e-5), (1e-4, 5e-5), (2e-5, 2e-6), (1e-5, 1e-6)]
# min(2 beta1 nu0, 2 beta2 nu_tau) >= 10
LOW_T_BETAS = [(10.0, 2.0), (12.0, 1.8), (20.0, 2.0), (25.0, 5.0), (40.0, 4.0), (60.0, 3.0)]


def _with_betas(params: TwoLevelParams, beta1: float, beta2: float) -> TwoLevelParams:
    return TwoLevelParams(**{**params.model_dump(), "beta1": beta1, "beta2": beta2})


class TestParams:
    """Test cases for TwoLevelParams and derived quantities."""

    def test_default_omega_follows_tau(self, nonadiabatic_params):
        """Test that the default omega follows tau."""
        assert nonadiabatic_params.effective_omega == pytest.approx(math.pi / (2 * 2.39))
        assert nonadiabatic_params.with_tau(4.0).effective_omega == pytest.approx(math.pi / 8.0)

    def test_explicit_omega_kept(self):
        """Test that an explicit omega is kept."""
        params = TwoLevelParams(gamma1=0.5, gamma2=3.0, tau=2.0, omega=1.3, beta1=2.0, beta2=0.1)

        assert params.with_tau(5.0).effective_omega == 1.3

    @pytest.mark.parametrize("field,value", [("gamma1", 0.0), ("tau", -1.0), ("beta2", 0.0), ("gamma2", math.inf)])
    def test_invalid_parameters(self, field, value):
        """Test rejection of invalid parameters."""
        data = {"gamma1": 0.5, "gamma2": 3.0, "tau": 2.39, "beta1": 2.0, "beta2": 0.1, field: value}

        with pytest.raises(ValueError):
            TwoLevelParams(**data)

    def test_derived_quantities(self, nonadiabatic_params):
        """Test the derived quantities."""
        d = derive(nonadiabatic_params)
        integral = -(0.5 * 2.39 + 2.5 * 2.39 / 2.0)

        assert d.i_integral == pytest.approx(integral, abs=1e-14)
        assert d.u == pytest.approx(math.cos(integral) ** 2, abs=1e-14)
        assert d.u + d.v == pytest.approx(1.0, abs=1e-15)
        assert d.a_star == pytest.approx(1.0 - 2.0 * d.u, abs=1e-15)
        assert d.nu0 == pytest.approx(math.sqrt(4 * 0.25 + d.omega ** 2) / 2)
        assert d.nu_tau == pytest.approx(math.sqrt(4 * 9.0 + d.omega ** 2) / 2)

    def test_custom_ramp_matches_linear(self, nonadiabatic_params):
        """Test a custom ramp equal to the linear one."""
        tau = nonadiabatic_params.tau
        ramped = TwoLevelParams(
            **nonadiabatic_params.model_dump(),
            ramp=lambda t: 0.5 + 2.5 * t / tau,
        )

        assert i_integral(ramped) == pytest.approx(i_integral(nonadiabatic_params), abs=1e-10)
        assert derive(ramped).u == pytest.approx(derive(nonadiabatic_params).u, abs=1e-10)


class TestClosedFormUnitary:
    """Test cases for the exact stroke propagators."""

    def test_unitary_along_the_stroke(self, nonadiabatic_params):
        """Test unitarity along the stroke."""
        for t in np.linspace(0.0, nonadiabatic_params.tau, 25):
            u = closed_form_unitary(nonadiabatic_params, float(t))
            assert unitarity_residual(u.entries) < 1e-12

    def test_starts_at_identity(self, nonadiabatic_params):
        """Test that the propagator starts at the identity."""
        np.testing.assert_allclose(closed_form_unitary(nonadiabatic_params, 0.0).entries, np.eye(2), atol=1e-15)

    def test_solves_schrodinger_equation(self, nonadiabatic_params):
        """Test the closed form against the Schrodinger equation."""
        protocol = expansion_protocol(nonadiabatic_params)
        h = 1e-5
        for t in (0.3, 1.1, 2.0):
            forward = closed_form_unitary(nonadiabatic_params, t + h).entries
            backward = closed_form_unitary(nonadiabatic_params, t - h).entries
            derivative = (forward - backward) / (2 * h)
            expected = -1j * protocol.hamiltonian_at(t) @ closed_form_unitary(nonadiabatic_params, t).entries
            np.testing.assert_allclose(derivative, expected, atol=1e-6)

    def test_survival_probability(self, nonadiabatic_params):
        """Test the survival probability u."""
        t = transition_matrix(closed_form_unitary(nonadiabatic_params))
        d = derive(nonadiabatic_params)

        np.testing.assert_allclose(np.diag(t), d.u, atol=1e-14)
        assert t[0, 1] == pytest.approx(d.v, abs=1e-14)

    def test_compression_undoes_expansion(self, nonadiabatic_params):
        """Test that the compression is the adjoint of the expansion."""
        u_exp = closed_form_unitary(nonadiabatic_params)
        u_com = compression_unitary(nonadiabatic_params)

        np.testing.assert_allclose(u_com.entries, u_exp.dagger().entries, atol=1e-14)
        np.testing.assert_allclose(transition_matrix(u_com), transition_matrix(u_exp), atol=1e-14)

    def test_time_outside_stroke(self, nonadiabatic_params):
        """Test rejection of a time outside the stroke."""
        with pytest.raises(InvalidInputError):
            closed_form_unitary(nonadiabatic_params, 3.0)


class TestMeanEnergetics:
    """Test cases for the closed-form means, bounds and eta_th."""

    @pytest.mark.parametrize("tau", TAU_SAMPLE)
    def test_means_match_enumeration(self, nonadiabatic_params, tau):
        """Test the closed-form means against enumeration."""
        params = nonadiabatic_params.with_tau(tau)
        joint = joint_distribution(build_engine_spec(params))
        means = mean_energetics(params)

        assert means.w1 == pytest.approx(joint.expectation("w1"), abs=1e-12)
        assert means.w3 == pytest.approx(joint.expectation("w3"), abs=1e-12)
        assert means.q2 == pytest.approx(joint.expectation("q2"), abs=1e-12)

    @pytest.mark.parametrize("tau", TAU_SAMPLE)
    def test_eta_th_matches_enumeration(self, nonadiabatic_params, tau):
        """Test the closed-form eta_th against enumeration."""
        params = nonadiabatic_params.with_tau(tau)

        assert eta_th(params) == pytest.approx(thermodynamic_efficiency(build_engine_spec(params)), rel=1e-10)

    def test_adiabatic_eta_th_is_otto_efficiency(self, adiabatic_params):
        """Test that adiabatic eta_th is the Otto efficiency."""
        d = derive(adiabatic_params)

        assert eta_th(adiabatic_params) == pytest.approx(1.0 - d.nu0 / d.nu_tau, abs=1e-12)

    @pytest.mark.parametrize("tau", np.linspace(0.5, 10.0, 40).tolist())
    def test_bounds_agree_with_sign_checks(self, nonadiabatic_params, tau):
        """Test the engine bounds against the sign checks."""
        params = nonadiabatic_params.with_tau(tau)
        if abs(engine_margin(params)) < 1e-6:
            pytest.skip("too close to the engine boundary")

        assert engine_bounds(params).satisfied == engine_conditions(build_engine_spec(params)).is_engine

    def test_window_edges_are_roots(self, nonadiabatic_params):
        """Test that the window edges are roots of the engine margin."""
        grid = np.linspace(2.0, 10.0, 161)
        edges = engine_window_edges(nonadiabatic_params, grid)

        assert edges
        for edge in edges:
            assert 2.0 <= edge <= 10.0
            assert abs(engine_margin(nonadiabatic_params.with_tau(edge))) < 1e-8


class TestEfficiencyDistribution:
    """Test cases for the closed-form efficiency distribution."""

    def test_six_point_support_nonadiabatic(self, nonadiabatic_params):
        """Test the six-point nonadiabatic support."""
        dist = efficiency_distribution_closed(nonadiabatic_params)
        d = derive(nonadiabatic_params)
        r = d.nu0 / d.nu_tau

        assert len(dist.atoms) == 6
        assert dist.support == pytest.approx([-math.inf, 0.0, 1.0 - r, 1.0, 1.0 + r, math.inf])

    def test_adiabatic_support_collapses(self, adiabatic_params):
        """Test the collapsed adiabatic support."""
        dist = efficiency_distribution_closed(adiabatic_params)
        d = derive(adiabatic_params)
        r = d.nu0 / d.nu_tau

        assert dist.infinity_mass < 1e-10
        assert dist.prob_at(1.0) < 1e-10
        assert dist.prob_at(1.0 + r) < 1e-10
        assert dist.prob_at(0.0) > dist.prob_at(1.0 - r) > 0.0

    def test_infinity_atoms_carry_uv(self, nonadiabatic_params):
        """Test the infinite atom weights."""
        dist = efficiency_distribution_closed(nonadiabatic_params)
        d = derive(nonadiabatic_params)
        x = nonadiabatic_params.beta1 * d.nu0

        assert dist.prob_at(-math.inf) == pytest.approx(d.u * d.v * expit(2 * x), abs=1e-15)
        assert dist.prob_at(math.inf) == pytest.approx(d.u * d.v * expit(-2 * x), abs=1e-15)
        assert dist.prob_at(1.0) == pytest.approx(d.u * d.v, abs=1e-15)

    @pytest.mark.parametrize("tau", TAU_SAMPLE)
    def test_normalized(self, nonadiabatic_params, tau):
        """Test normalization of the closed-form distribution."""
        assert efficiency_distribution_closed(nonadiabatic_params.with_tau(tau)).total_mass == pytest.approx(
            1.0, abs=1e-12
        )

    @pytest.mark.parametrize("tau", TAU_GRID)
    def test_matches_enumeration(self, nonadiabatic_params, tau):
        """Test the closed-form distribution against enumeration over a duration grid."""
        params = nonadiabatic_params.with_tau(tau)
        closed = efficiency_distribution_closed(params)
        enumerated = efficiency_distribution(joint_distribution(build_engine_spec(params)))

        assert distribution_residual(closed, enumerated) < 1e-12

    @pytest.mark.parametrize("betas", [(0.3, 0.05), (5.0, 0.5), (40.0, 4.0)])
    def test_matches_enumeration_across_temperatures(self, nonadiabatic_params, betas):
        """Test the closed-form distribution against enumeration across temperatures."""
        data = nonadiabatic_params.model_dump()
        data.update(beta1=betas[0], beta2=betas[1])
        params = TwoLevelParams(**data)
        closed = efficiency_distribution_closed(params)
        enumerated = efficiency_distribution(joint_distribution(build_engine_spec(params)))

        assert distribution_residual(closed, enumerated) < 1e-12

    def test_equal_gaps_merge_zero_and_one_minus_r(self):
        """Test merging of the 0 and 1 - r atoms for equal gaps."""
        params = TwoLevelParams(gamma1=1.5, gamma2=1.5, tau=2.39, beta1=2.0, beta2=0.1)
        dist = efficiency_distribution_closed(params)
        finite = [v for v in dist.support if math.isfinite(v)]

        assert finite == pytest.approx([0.0, 1.0, 2.0])
        assert dist.total_mass == pytest.approx(1.0, abs=1e-12)


class TestAdiabaticMoments:
    """Test cases for the adiabatic mean, variance and covariance."""

    def test_adiabatic_tau(self):
        """Test the adiabatic duration."""
        assert adiabatic_tau(0.5, 3.0, 4) == pytest.approx(ADIABATIC_TAU, abs=1e-14)
        with pytest.raises(InvalidInputError):
            adiabatic_tau(0.5, 3.0, 0)

    def test_nearest_adiabatic_tau(self, nonadiabatic_params):
        """Test the nearest adiabatic duration."""
        assert nearest_adiabatic_tau(nonadiabatic_params.with_tau(7.18)) == pytest.approx(ADIABATIC_TAU, abs=1e-14)

    def test_nearest_adiabatic_tau_needs_linear_ramp(self, nonadiabatic_params):
        """Test that the nearest adiabatic duration needs a linear ramp."""
        ramped = TwoLevelParams(**nonadiabatic_params.model_dump(), ramp=lambda t: 1.0)

        with pytest.raises(InvalidInputError):
            nearest_adiabatic_tau(ramped)

    def test_is_adiabatic(self, adiabatic_params, nonadiabatic_params):
        """Test the adiabatic gate."""
        assert is_adiabatic(adiabatic_params)
        assert not is_adiabatic(nonadiabatic_params)
        # the rounded duration misses the gate
        assert not is_adiabatic(adiabatic_params.with_tau(7.18))

    @pytest.mark.parametrize("betas", ADIABATIC_BETAS)
    def test_moments_match_enumeration(self, adiabatic_params, betas):
        """Test the adiabatic mean and variance against enumeration over a grid of bath temperatures."""
        params = _with_betas(adiabatic_params, *betas)
        moments = efficiency_moments(efficiency_distribution(joint_distribution(build_engine_spec(params))))

        assert moments.defined
        assert moments.mean == pytest.approx(adiabatic_mean(params), abs=1e-12)
        assert moments.variance == pytest.approx(adiabatic_variance(params), abs=1e-12)

    def test_mean_below_eta_th(self, adiabatic_params):
        """Test that the adiabatic mean lies below eta_th."""
        assert adiabatic_mean(adiabatic_params) < eta_th(adiabatic_params)

    def test_nonadiabatic_rejected(self, nonadiabatic_params):
        """Test rejection of nonadiabatic parameters."""
        for operation in (adiabatic_mean, adiabatic_variance, covariance_closed):
            with pytest.raises(PreconditionError):
                operation(nonadiabatic_params)

    def test_covariance_matches_enumeration(self, adiabatic_params):
        """Test the closed-form covariance against enumeration."""
        report = efficiency_heat_covariance(joint_distribution(build_engine_spec(adiabatic_params)))

        assert report.defined
        assert report.cov == pytest.approx(covariance_closed(adiabatic_params), abs=1e-12)
        assert report.identity_residual < 1e-12
        assert covariance_closed(adiabatic_params) > 0

    @pytest.mark.parametrize("betas", HIGH_T_BETAS)
    def test_high_temperature_limits(self, adiabatic_params, betas):
        """Test that the adiabatic moments approach their high-temperature limits."""
        params = _with_betas(adiabatic_params, *betas)

        assert adiabatic_mean(params) == pytest.approx(adiabatic_mean_limits(params).high_t, rel=1e-6)
        assert adiabatic_variance(params) == pytest.approx(adiabatic_variance_limits(params).high_t, rel=1e-6)

    @pytest.mark.parametrize("betas", LOW_T_BETAS)
    def test_low_temperature_limits(self, adiabatic_params, betas):
        """Test that the adiabatic moments approach their low-temperature limits."""
        params = _with_betas(adiabatic_params, *betas)

        assert adiabatic_mean(params) == pytest.approx(adiabatic_mean_limits(params).low_t, rel=1e-3)
        assert adiabatic_variance(params) == pytest.approx(adiabatic_variance_limits(params).low_t, rel=1e-3)


class TestBetaSweep:
    """Test cases for the adiabatic inverse-temperature sweep."""

    def test_bundled_sweep_rows(self):
        """Test every row of the bundled sweep against the covariance sign and the eta_th bound."""
        config = load_config(str(CONFIG_DIR / "sweep_beta.json"))
        params = config.params()
        params = params.with_tau(nearest_adiabatic_tau(params))
        frame = sweep_beta_rows(params, config.sweep_beta.beta1.grid(), config.sweep_beta.ratio)

        assert len(frame) == 120
        for row in frame.itertuples(index=False):
            point = _with_betas(params, row.beta1, row.beta2)
            moments = efficiency_moments(efficiency_distribution(joint_distribution(build_engine_spec(point))))

            assert row.beta1 == pytest.approx(10.0 * row.beta2, rel=1e-14)
            assert row.cov_q2_eta >= -1e-12
            assert covariance_closed(point) >= -1e-12
            assert moments.defined
            assert moments.mean <= eta_th(point) + 1e-12
            assert row.mean_eta <= row.eta_th + 1e-12
