"""
Moments and Engine Diagnostics
==============================
Averages of work and heat, the thermodynamic efficiency, heat-engine sign
conditions, efficiency moments and the heat/efficiency covariance.
"""

import math
from typing import Optional

import numpy as np

from otto_engine.config import get_settings
from otto_engine.spectra.distributions import classify_efficiency, joint_distribution
from otto_engine.spectra.models import (
    CovarianceReport,
    EfficiencyDistribution,
    EngineConditions,
    EngineSpec,
    JointDistribution,
    MomentReport,
)
from otto_engine.utils.errors import InvalidInputError, UndefinedResultError
from otto_engine.utils.logging_config import get_logger

logger = get_logger("spectra.moments")


# =============================================================================
# MEAN ENERGETICS
# =============================================================================

def mean_work1(spec: EngineSpec) -> float:
    """<W1>, the mean expansion work."""
    return joint_distribution(spec).expectation("w1")


def mean_work3(spec: EngineSpec) -> float:
    """<W3>, the mean compression work."""
    return joint_distribution(spec).expectation("w3")


def mean_heat2(spec: EngineSpec) -> float:
    """<Q2>, the mean heat absorbed from the hot bath."""
    return joint_distribution(spec).expectation("q2")


def _eta_th_from_means(work_sum: float, heat: float, tol: float) -> float:
    if abs(heat) <= tol:
        raise UndefinedResultError(f"<Q2> = {heat!r} vanishes; thermodynamic efficiency undefined")
    return -work_sum / heat


def thermodynamic_efficiency(spec: EngineSpec, tol: Optional[float] = None) -> float:
    """
    eta_th = -(<W1> + <W3>) / <Q2>.

    Raises:
        UndefinedResultError: |<Q2>| below tolerance
    """
    tol = get_settings().grouping_tol if tol is None else tol
    joint = joint_distribution(spec)
    return _eta_th_from_means(joint.expectation("w"), joint.expectation("q2"), tol)


def carnot_efficiency(beta_cold: float, beta_hot: float) -> float:
    """Carnot bound 1 - T_cold / T_hot = 1 - beta_hot / beta_cold."""
    if beta_cold <= 0 or beta_hot <= 0:
        raise InvalidInputError("inverse temperatures must be positive")
    return 1.0 - beta_hot / beta_cold


def engine_conditions(spec: EngineSpec) -> EngineConditions:
    """Check <Q2> > 0 and -(<W1> + <W3>) > 0."""
    joint = joint_distribution(spec)
    heat = joint.expectation("q2")
    work_out = -joint.expectation("w")
    conditions = EngineConditions(
        heat_in_positive=heat > 0,
        work_out_positive=work_out > 0,
        is_engine=heat > 0 and work_out > 0,
        mean_heat2=heat,
        mean_work_out=work_out,
    )
    if not conditions.is_engine:
        logger.info(
            "parameter point does not operate as a heat engine",
            extra={"extra_data": conditions.model_dump()},
        )
    return conditions


# =============================================================================
# EFFICIENCY STATISTICS
# =============================================================================

def efficiency_moments(dist: EfficiencyDistribution, threshold: Optional[float] = None) -> MomentReport:
    """
    Mean and variance of the stochastic efficiency.

    Moments are reported only when the mass at +/-inf is below ``threshold``
    (1e-12 by default); otherwise the average efficiency is undefined.
    """
    threshold = get_settings().definedness_tol if threshold is None else threshold
    infinity_mass = dist.infinity_mass
    if infinity_mass >= threshold:
        return MomentReport(defined=False, infinity_mass=infinity_mass)

    eta, prob = dist.finite_atoms()
    mean = float(np.sum(eta * prob))
    variance = float(np.sum(prob * (eta - mean) ** 2))
    return MomentReport(mean=mean, variance=variance, defined=True, infinity_mass=infinity_mass)


def efficiency_heat_covariance(joint: JointDistribution, threshold: Optional[float] = None) -> CovarianceReport:
    """
    Cov(Q2, eta) and the residual of <eta> = eta_th - Cov(Q2, eta) / <Q2>.

    The covariance is computed directly from per-atom eta and Q2, so the
    residual is an independent check of the identity
    Cov(Q2, eta) = -(<W1> + <W3>) - <Q2><eta>.
    """
    threshold = get_settings().definedness_tol if threshold is None else threshold
    w1, q2, w3, prob = joint.as_arrays()
    eta, _ = classify_efficiency(w1, q2, w3, joint.grouping_tol)

    finite = np.isfinite(eta)
    infinity_mass = math.fsum(prob[~finite])
    if infinity_mass >= threshold:
        return CovarianceReport(defined=False)

    p, e, q = prob[finite], eta[finite], q2[finite]
    mean_eta = float(np.sum(p * e))
    mean_q2 = float(np.sum(prob * q2))
    cov = float(np.sum(p * (q - mean_q2) * (e - mean_eta)))

    residual: Optional[float] = None
    if abs(mean_q2) > joint.grouping_tol:
        eta_th = _eta_th_from_means(float(np.sum(prob * (w1 + w3))), mean_q2, joint.grouping_tol)
        residual = abs(mean_eta - eta_th + cov / mean_q2)
    return CovarianceReport(cov=cov, identity_residual=residual, defined=True)
