"""
CLI Commands
============
One function per subcommand. Each takes a validated RunConfig, writes its
artifact and returns the in-memory result:

- cmd_dist:       efficiency distribution and moments (JSON)
- cmd_sweep_tau:  closed-form engine quantities over stroke durations (CSV)
- cmd_sweep_beta: adiabatic moments and limits over inverse temperatures (CSV)
- cmd_sample:     Monte Carlo histogram with goodness of fit (JSON)
- cmd_validate:   cross-check suite (JSON report)

Failed checks and rejected fits raise CheckFailedError after the artifact
has been written.
"""

import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from otto_engine.cli.artifacts import (
    distribution_to_dict,
    empirical_to_dict,
    finite_or_none,
    fit_to_dict,
    moments_to_dict,
    write_csv,
    write_json,
)
from otto_engine.cli.config import RunConfig
from otto_engine.cli.models import CheckResult, ValidationReport
from otto_engine.config import UNITARITY_TOL
from otto_engine.propagator import compression_protocol, convergence_report, expansion_protocol, propagate
from otto_engine.sampler import estimate_efficiency_distribution, goodness_of_fit
from otto_engine.spectra import (
    EfficiencyDistribution,
    EngineSpec,
    efficiency_distribution,
    efficiency_heat_covariance,
    efficiency_moments,
    engine_conditions,
    joint_distribution,
    thermodynamic_efficiency,
    transition_matrix,
    work1_distribution,
)
from otto_engine.twolevel import (
    TwoLevelParams,
    adiabatic_mean,
    adiabatic_mean_limits,
    adiabatic_variance,
    adiabatic_variance_limits,
    build_engine_spec,
    closed_form_unitary,
    compression_unitary,
    covariance_closed,
    derive,
    efficiency_distribution_closed,
    engine_bounds,
    eta_th,
    is_adiabatic,
    mean_energetics,
    nearest_adiabatic_tau,
)
from otto_engine.utils.errors import CheckFailedError, SupportViolationError, UndefinedResultError
from otto_engine.utils.logging_config import get_logger, log_check_result, log_sweep_row
from otto_engine.utils.validators import unitarity_residual

logger = get_logger("cli.commands")

SWEEP_TAU_COLUMNS = [
    "tau", "omega", "nu0", "nu_tau", "u", "a_star", "eta_th", "mean_eta", "is_engine", "bound14", "bound15",
]
SWEEP_BETA_COLUMNS = [
    "beta1", "beta2", "mean_eta", "mean_high_limit", "mean_low_limit",
    "variance", "var_high_limit", "var_low_limit", "cov_q2_eta", "eta_th",
]

# Contract tolerances of the cross-check suite.
EXACT_TOL = 1e-12
PROPAGATOR_TOL = 1e-8
PROBABILITY_TOL = 1e-10
MIN_ORDER = 1.9
BOUNDARY_TOL = 1e-10
# eta_th is a ratio with <Q2> in the denominator; compared relatively.
ETA_TH_TOL = 1e-10


def _eta_th_or_none(params: TwoLevelParams) -> Optional[float]:
    try:
        return eta_th(params)
    except UndefinedResultError:
        return None


# =============================================================================
# dist
# =============================================================================

def cmd_dist(config: RunConfig) -> Dict[str, Any]:
    """Exact efficiency distribution of the configured engine."""
    spec = config.engine_spec()
    dist = efficiency_distribution(joint_distribution(spec, config.tol))
    params = config.describe()
    if config.model == "twolevel":
        params["derived"] = derive(config.params()).model_dump()

    payload = {
        **distribution_to_dict(dist),
        "params": params,
        "moments": moments_to_dict(efficiency_moments(dist)),
    }
    write_json(payload, config.artifact_path("dist.json"))
    return payload


# =============================================================================
# sweeps
# =============================================================================

def sweep_tau_rows(params: TwoLevelParams, taus: np.ndarray) -> pd.DataFrame:
    rows = []
    for index, tau in enumerate(taus):
        point = params.with_tau(float(tau))
        derived = derive(point)
        bounds = engine_bounds(point)
        row = {
            "tau": float(tau),
            "omega": derived.omega,
            "nu0": derived.nu0,
            "nu_tau": derived.nu_tau,
            "u": derived.u,
            "a_star": derived.a_star,
            "eta_th": _eta_th_or_none(point),
            "mean_eta": adiabatic_mean(point) if is_adiabatic(point) else None,
            "is_engine": bounds.satisfied,
            "bound14": bounds.bound_heat,
            "bound15": bounds.bound_work,
        }
        log_sweep_row(logger, "tau", index, len(taus), row)
        rows.append(row)
    return pd.DataFrame(rows, columns=SWEEP_TAU_COLUMNS)


def cmd_sweep_tau(config: RunConfig) -> pd.DataFrame:
    """Closed-form engine quantities over the stroke-duration grid."""
    frame = sweep_tau_rows(config.params(), config.sweep_tau.grid())
    write_csv(frame, config.artifact_path("sweep_tau.csv"))
    return frame


def sweep_beta_rows(params: TwoLevelParams, beta1_grid: np.ndarray, ratio: float) -> pd.DataFrame:
    rows = []
    base = params.model_dump()
    for index, beta1 in enumerate(beta1_grid):
        point = TwoLevelParams(**{**base, "beta1": float(beta1), "beta2": float(beta1) / ratio})
        mean_limits = adiabatic_mean_limits(point)
        var_limits = adiabatic_variance_limits(point)
        row = {
            "beta1": point.beta1,
            "beta2": point.beta2,
            "mean_eta": adiabatic_mean(point),
            "mean_high_limit": mean_limits.high_t,
            "mean_low_limit": mean_limits.low_t,
            "variance": adiabatic_variance(point),
            "var_high_limit": var_limits.high_t,
            "var_low_limit": var_limits.low_t,
            "cov_q2_eta": covariance_closed(point),
            "eta_th": _eta_th_or_none(point),
        }
        log_sweep_row(logger, "beta", index, len(beta1_grid), row)
        rows.append(row)
    return pd.DataFrame(rows, columns=SWEEP_BETA_COLUMNS)


def cmd_sweep_beta(config: RunConfig) -> pd.DataFrame:
    """
    Adiabatic moments, their limits and Cov(Q2, eta) over beta1 with beta2 = beta1 / ratio.

    The stroke duration is moved to the nearest adiabatic time so the
    adiabatic closed forms apply.
    """
    params = config.params()
    tau = nearest_adiabatic_tau(params)
    if tau != params.tau:
        logger.info(f"tau {params.tau} moved to the nearest adiabatic time {tau!r}")
    frame = sweep_beta_rows(params.with_tau(tau), config.sweep_beta.beta1.grid(), config.sweep_beta.ratio)
    write_csv(frame, config.artifact_path("sweep_beta.csv"))
    return frame


# =============================================================================
# sample
# =============================================================================

def _reference_spec(spec: EngineSpec, config: RunConfig) -> EngineSpec:
    sample = config.sample
    if sample.reference_beta_cold is None and sample.reference_beta_hot is None:
        return spec
    return EngineSpec(
        spectrum_start=spec.spectrum_start,
        spectrum_end=spec.spectrum_end,
        u_expansion=spec.u_expansion,
        u_compression=spec.u_compression,
        beta_cold=sample.reference_beta_cold or spec.beta_cold,
        beta_hot=sample.reference_beta_hot or spec.beta_hot,
    )


def cmd_sample(config: RunConfig) -> Dict[str, Any]:
    """Monte Carlo estimate compared with the exact distribution."""
    spec = config.engine_spec()
    sample = config.sample
    path = config.artifact_path("sample.json")
    reference = _reference_spec(spec, config)
    try:
        empirical = estimate_efficiency_distribution(
            spec, sample.n_samples, sample.seed, workers=sample.workers, chunk=sample.chunk, tol=config.tol
        )
        exact = efficiency_distribution(joint_distribution(reference, config.tol))
        fit = goodness_of_fit(empirical, exact, sample.level)
    except SupportViolationError as e:
        write_json({"params": config.describe(), **e.to_dict()}, path)
        raise

    payload = {
        "params": config.describe(),
        "reference": {"beta_cold": reference.beta_cold, "beta_hot": reference.beta_hot},
        "empirical": empirical_to_dict(empirical),
        "exact": distribution_to_dict(exact),
        "goodness_of_fit": fit_to_dict(fit),
    }
    write_json(payload, path)
    if fit.rejected:
        raise CheckFailedError(f"chi-square test rejects the exact distribution (p = {fit.p_value:.3e})", payload)
    return payload


# =============================================================================
# validate
# =============================================================================

def _check(
    name: str,
    residual: Optional[float],
    tolerance: float,
    detail: str = "",
    passed: Optional[bool] = None,
) -> CheckResult:
    if passed is None:
        passed = residual is not None and math.isfinite(residual) and residual <= tolerance
    result = CheckResult(name=name, passed=passed, residual=finite_or_none(residual), tolerance=tolerance, detail=detail)
    log_check_result(logger, name, passed, math.nan if residual is None else residual, tolerance)
    return result


def distribution_residual(a: EfficiencyDistribution, b: EfficiencyDistribution) -> float:
    """Largest atom-weight difference between two efficiency distributions (support mismatches included)."""
    residual = abs(a.zero_over_zero_weight - b.zero_over_zero_weight)
    for first, second in ((a, b), (b, a)):
        for atom in first.atoms:
            residual = max(residual, abs(atom.prob - second.prob_at(atom.eta)))
    return residual


def _matrix_unitarity(matrix: np.ndarray) -> float:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or not np.all(np.isfinite(matrix)):
        return math.inf
    return unitarity_residual(matrix)


def _generic_checks(spec: EngineSpec, tol: float) -> List[CheckResult]:
    checks = []
    joint = joint_distribution(spec, tol)
    dist = efficiency_distribution(joint)
    checks.append(_check("normalization", abs(dist.total_mass - 1.0), EXACT_TOL))

    stochastic = 0.0
    for unitary in (spec.u_expansion, spec.u_compression):
        t = transition_matrix(unitary)
        stochastic = max(stochastic, float(np.max(np.abs(t.sum(axis=0) - 1.0))), float(np.max(np.abs(t.sum(axis=1) - 1.0))))
    checks.append(_check("double_stochasticity", stochastic, PROBABILITY_TOL))

    direct = work1_distribution(spec, tol)
    marginal = joint.marginal("w1")
    chain = math.inf
    if len(marginal) == len(direct):
        chain = max(
            max(abs(a.prob - b.prob), 0.0 if abs(a.value - b.value) <= tol else math.inf)
            for a, b in zip(marginal, direct)
        )
    checks.append(_check("chain_rule_w1", chain, EXACT_TOL))

    covariance = efficiency_heat_covariance(joint)
    if covariance.defined and covariance.identity_residual is not None:
        checks.append(_check("covariance_identity", covariance.identity_residual, EXACT_TOL))
    return checks


def _twolevel_checks(config: RunConfig) -> List[CheckResult]:
    params = config.params()
    tol = config.tol
    checks = []

    # closed form against enumeration
    taus = [params.tau] + [float(t) for t in config.validate_suite.tau.grid()]
    worst_weight, worst_mass = 0.0, 0.0
    worst_means, worst_eta = 0.0, 0.0
    region_mismatches = []
    for tau in taus:
        point = params.with_tau(tau)
        spec = build_engine_spec(point)
        joint = joint_distribution(spec, tol)
        enumerated = efficiency_distribution(joint)
        closed = efficiency_distribution_closed(point, tol)
        worst_weight = max(worst_weight, distribution_residual(closed, enumerated))
        worst_mass = max(worst_mass, abs(enumerated.total_mass - 1.0), abs(closed.total_mass - 1.0))

        means = mean_energetics(point)
        worst_means = max(
            worst_means,
            abs(means.w1 - joint.expectation("w1")),
            abs(means.w3 - joint.expectation("w3")),
            abs(means.q2 - joint.expectation("q2")),
        )

        closed_eta = _eta_th_or_none(point)
        if closed_eta is not None:
            try:
                enumerated_eta = thermodynamic_efficiency(spec)
                worst_eta = max(worst_eta, abs(closed_eta - enumerated_eta) / max(1.0, abs(closed_eta)))
            except UndefinedResultError:
                pass

        conditions = engine_conditions(spec)
        bounds = engine_bounds(point)
        margin = min(bounds.bound_heat, bounds.bound_work) - bounds.a_star
        near_boundary = min(abs(margin), abs(conditions.mean_heat2), abs(conditions.mean_work_out)) <= BOUNDARY_TOL
        if not near_boundary and bounds.satisfied != conditions.is_engine:
            region_mismatches.append(tau)

    checks.append(_check("closed_form_vs_enumeration", worst_weight, EXACT_TOL, f"{len(taus)} stroke durations"))
    checks.append(_check("closed_form_normalization", worst_mass, EXACT_TOL))
    checks.append(_check("mean_energetics", worst_means, EXACT_TOL))
    checks.append(_check("thermodynamic_efficiency", worst_eta, ETA_TH_TOL))
    checks.append(
        _check(
            "engine_region",
            float(len(region_mismatches)),
            0.0,
            f"bounds disagree with sign checks at tau={region_mismatches}" if region_mismatches else "",
        )
    )

    # exact unitaries
    grid = np.linspace(0.0, params.tau, 100)
    worst_unitarity = max(unitarity_residual(closed_form_unitary(params, float(t)).entries) for t in grid)
    checks.append(_check("unitarity", worst_unitarity, EXACT_TOL))

    # numerical propagation
    u_exp = propagate(expansion_protocol(params), steps_per_unit=config.steps_per_unit)
    u_com = propagate(compression_protocol(params), steps_per_unit=config.steps_per_unit)
    exact_exp, exact_com = closed_form_unitary(params), compression_unitary(params)
    checks.append(
        _check("propagator_expansion", float(np.max(np.abs(u_exp.entries - exact_exp.entries))), PROPAGATOR_TOL)
    )
    checks.append(
        _check("propagator_compression", float(np.max(np.abs(u_com.entries - exact_com.entries))), PROPAGATOR_TOL)
    )
    checks.append(
        _check(
            "time_reversal_probabilities",
            float(np.max(np.abs(transition_matrix(u_com) - transition_matrix(u_exp)))),
            PROBABILITY_TOL,
        )
    )
    report = convergence_report(expansion_protocol(params), config.validate_suite.convergence_steps)
    order = report.observed_order
    checks.append(
        _check(
            "convergence_order",
            order,
            MIN_ORDER,
            "observed order must reach the tolerance",
            passed=order is not None and order >= MIN_ORDER,
        )
    )

    # adiabatic moments and covariance
    adiabatic = params.with_tau(nearest_adiabatic_tau(params))
    joint = joint_distribution(build_engine_spec(adiabatic), tol)
    moments = efficiency_moments(efficiency_distribution(joint))
    if moments.defined:
        moment_residual = max(
            abs(moments.mean - adiabatic_mean(adiabatic)),
            abs(moments.variance - adiabatic_variance(adiabatic)),
        )
    else:
        moment_residual = None
    checks.append(_check("adiabatic_moments", moment_residual, EXACT_TOL, f"tau={adiabatic.tau!r}"))

    covariance = efficiency_heat_covariance(joint)
    checks.append(
        _check(
            "adiabatic_covariance_identity",
            covariance.identity_residual if covariance.defined else None,
            EXACT_TOL,
        )
    )
    checks.append(
        _check(
            "covariance_closed_form",
            abs(covariance.cov - covariance_closed(adiabatic)) if covariance.defined else None,
            EXACT_TOL,
        )
    )

    checks.extend(_generic_checks(build_engine_spec(params), tol))
    return checks


def cmd_validate(config: RunConfig) -> ValidationReport:
    """
    Run the cross-check suite.

    Generic configs first check the supplied matrices for unitarity; the
    remaining checks run only when both pass.
    """
    if config.model == "twolevel":
        checks = _twolevel_checks(config)
    else:
        matrices = config.generic.load_matrices(Path(config.base_dir))
        checks = [
            _check(f"unitarity_{name}", _matrix_unitarity(matrix), UNITARITY_TOL)
            for name, matrix in matrices.items()
        ]
        if all(c.passed for c in checks):
            checks.extend(_generic_checks(config.engine_spec(), config.tol))

    report = ValidationReport(checks=checks)
    payload = {"params": config.describe(), "passed": report.passed, "checks": [c.model_dump() for c in checks]}
    write_json(payload, config.artifact_path("validate.json"))
    if not report.passed:
        raise CheckFailedError(f"{len(report.failed)} check(s) failed: {', '.join(report.failed)}", payload)
    return report
