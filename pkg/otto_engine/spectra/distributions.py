"""
Two-Projective-Measurement Distributions
========================================
Work, heat and efficiency statistics of one Otto cycle:
- Expansion work distribution P(W1)
- Conditional heat P(Q2 | m) and compression work P(W3 | k)
- Joint distribution P(W1, Q2, W3) from the chain rule
- Stochastic efficiency distribution on the extended real line

The hot isochore is assumed to thermalize completely, so the level k found
after it is Boltzmann distributed at beta_hot independently of the level m
found before it.
"""

import math
from typing import List, Optional, Tuple

import numpy as np

from otto_engine.config import get_settings
from otto_engine.spectra.models import (
    EfficiencyAtom,
    EfficiencyDistribution,
    EnergyAtom,
    EngineSpec,
    JointAtom,
    JointDistribution,
)
from otto_engine.spectra.thermal import thermal_state, transition_matrix
from otto_engine.utils.atoms import merge_atoms
from otto_engine.utils.errors import InvalidInputError
from otto_engine.utils.logging_config import get_logger, log_operation_call

logger = get_logger("spectra.distributions")


def _grouping_tol(tol: Optional[float]) -> float:
    return get_settings().grouping_tol if tol is None else tol


def _energy_atoms(values: np.ndarray, probs: np.ndarray, tol: float) -> List[EnergyAtom]:
    probs = probs / math.fsum(probs.ravel())
    points, masses = merge_atoms(values.ravel(), probs.ravel(), tol)
    return [EnergyAtom(value=float(v), prob=float(p)) for v, p in zip(points, masses)]


# =============================================================================
# SINGLE-STROKE DISTRIBUTIONS
# =============================================================================

def work1_distribution(spec: EngineSpec, tol: Optional[float] = None) -> List[EnergyAtom]:
    """
    Distribution of the expansion work W1 = E_m^tau - E_n^0.

    Args:
        spec: Engine specification
        tol: Grouping tolerance (defaults to settings)

    Returns:
        Merged, normalized atoms sorted by work value
    """
    tol = _grouping_tol(tol)
    start, end = spec.spectrum_start.energies, spec.spectrum_end.energies
    populations = thermal_state(spec.spectrum_start, spec.beta_cold).populations
    transitions = transition_matrix(spec.u_expansion)

    work = end[None, :] - start[:, None]
    weights = populations[:, None] * transitions
    return _energy_atoms(work, weights, tol)


def conditional_heat_distribution(spec: EngineSpec, level_m: int, tol: Optional[float] = None) -> List[EnergyAtom]:
    """
    Distribution of Q2 = E_k^tau - E_m^tau given the post-expansion level m.

    Args:
        spec: Engine specification
        level_m: Index of the level measured after expansion
        tol: Grouping tolerance (defaults to settings)

    Returns:
        Merged, normalized heat atoms
    """
    if not 0 <= level_m < spec.dimension:
        raise InvalidInputError(f"level index {level_m} outside 0..{spec.dimension - 1}")
    end = spec.spectrum_end.energies
    populations = thermal_state(spec.spectrum_end, spec.beta_hot).populations
    return _energy_atoms(end - end[level_m], populations, _grouping_tol(tol))


def conditional_work3_distribution(spec: EngineSpec, level_k: int, tol: Optional[float] = None) -> List[EnergyAtom]:
    """
    Distribution of W3 = E_l^0 - E_k^tau given the post-isochore level k.

    Args:
        spec: Engine specification
        level_k: Index of the level measured after the hot isochore
        tol: Grouping tolerance (defaults to settings)

    Returns:
        Merged, normalized compression-work atoms
    """
    if not 0 <= level_k < spec.dimension:
        raise InvalidInputError(f"level index {level_k} outside 0..{spec.dimension - 1}")
    start, end = spec.spectrum_start.energies, spec.spectrum_end.energies
    transitions = transition_matrix(spec.u_compression)
    return _energy_atoms(start - end[level_k], transitions[level_k], _grouping_tol(tol))


# =============================================================================
# JOINT DISTRIBUTION
# =============================================================================

def path_tables(spec: EngineSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    Per-path quantities over all index quadruples (n, m, k, l).

    Returns:
        Tuple of (w1, q2, w3, prob) arrays of shape (d, d, d, d)
    """
    start, end = spec.spectrum_start.energies, spec.spectrum_end.energies
    p_cold = thermal_state(spec.spectrum_start, spec.beta_cold).populations
    p_hot = thermal_state(spec.spectrum_end, spec.beta_hot).populations
    t_exp = transition_matrix(spec.u_expansion)
    t_com = transition_matrix(spec.u_compression)

    n, m, k, l = np.ix_(*(np.arange(spec.dimension),) * 4)
    w1 = end[m] - start[n]
    q2 = end[k] - end[m]
    w3 = start[l] - end[k]
    prob = p_cold[n] * t_exp[n, m] * p_hot[k] * t_com[k, l]
    shape = (spec.dimension,) * 4
    return (
        np.broadcast_to(w1, shape),
        np.broadcast_to(q2, shape),
        np.broadcast_to(w3, shape),
        prob,
    )


def joint_distribution(spec: EngineSpec, tol: Optional[float] = None) -> JointDistribution:
    """
    Joint distribution P(W1, Q2, W3) of one cycle.

    Sums over all d^4 measurement paths (n, m, k, l) with weight
    T_exp[n, m] T_com[k, l] exp(-beta1 E_n^0) exp(-beta2 E_k^tau) / (Z^0 Z^tau)
    and merges paths whose (W1, Q2, W3) agree within ``tol``.

    Args:
        spec: Engine specification
        tol: Grouping tolerance (defaults to settings)

    Returns:
        Normalized JointDistribution
    """
    tol = _grouping_tol(tol)
    w1, q2, w3, prob = path_tables(spec)

    total = math.fsum(prob.ravel())
    if abs(total - 1.0) > 1e-9:
        logger.warning(f"path weights sum to {total!r} before renormalization")
    prob = prob / total

    points = np.stack([w1.ravel(), q2.ravel(), w3.ravel()], axis=1)
    merged, masses = merge_atoms(points, prob.ravel(), tol)

    log_operation_call(logger, "joint_distribution", {"dimension": spec.dimension, "atoms": len(masses)})
    atoms = [
        JointAtom(w1=float(a), q2=float(b), w3=float(c), prob=float(p))
        for (a, b, c), p in zip(merged, masses)
    ]
    return JointDistribution(atoms=atoms, grouping_tol=tol)


def heat2_distribution(spec: EngineSpec, tol: Optional[float] = None) -> List[EnergyAtom]:
    """Marginal distribution of the absorbed heat Q2."""
    return joint_distribution(spec, tol).marginal("q2")


def work3_distribution(spec: EngineSpec, tol: Optional[float] = None) -> List[EnergyAtom]:
    """Marginal distribution of the compression work W3."""
    return joint_distribution(spec, tol).marginal("w3")


# =============================================================================
# EFFICIENCY DISTRIBUTION
# =============================================================================

def classify_efficiency(
    w1: np.ndarray,
    q2: np.ndarray,
    w3: np.ndarray,
    tol: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Stochastic efficiency eta = -(W1 + W3) / Q2 with the 0/0 convention.

    Vanishing heat (|Q2| <= tol) is treated as 0+: zero work gives eta = 0,
    positive work output -(W1 + W3) > tol gives +inf and negative output
    gives -inf.

    Args:
        w1, q2, w3: Broadcastable arrays of energies
        tol: Absolute tolerance deciding "zero"

    Returns:
        Tuple of (eta array, boolean mask of 0/0 outcomes)
    """
    w1, q2, w3 = np.broadcast_arrays(np.asarray(w1, float), np.asarray(q2, float), np.asarray(w3, float))
    output = -(w1 + w3)
    no_heat = np.abs(q2) <= tol

    eta = np.empty(output.shape)
    finite = ~no_heat
    eta[finite] = output[finite] / q2[finite]

    zero_over_zero = no_heat & (np.abs(output) <= tol)
    eta[zero_over_zero] = 0.0
    eta[no_heat & (output > tol)] = math.inf
    eta[no_heat & (output < -tol)] = -math.inf
    return eta, zero_over_zero


def build_efficiency_distribution(
    eta: np.ndarray,
    prob: np.ndarray,
    zero_over_zero_weight: float,
    tol: float,
) -> EfficiencyDistribution:
    """
    Assemble an EfficiencyDistribution from per-outcome values.

    Finite values are merged within ``tol``; infinite ones by sign. Atoms are
    ordered -inf, finite ascending, +inf and zero-mass atoms are dropped.
    """
    eta = np.asarray(eta, dtype=float).ravel()
    prob = np.asarray(prob, dtype=float).ravel()
    finite = np.isfinite(eta)

    points, masses = merge_atoms(eta[finite], prob[finite], tol)
    atoms = []
    minus_inf = math.fsum(prob[eta == -math.inf])
    if minus_inf > 0.0:
        atoms.append(EfficiencyAtom(eta=-math.inf, prob=minus_inf))
    atoms.extend(EfficiencyAtom(eta=float(v), prob=float(p)) for v, p in zip(points, masses))
    plus_inf = math.fsum(prob[eta == math.inf])
    if plus_inf > 0.0:
        atoms.append(EfficiencyAtom(eta=math.inf, prob=plus_inf))

    return EfficiencyDistribution(
        atoms=atoms,
        zero_over_zero_weight=float(zero_over_zero_weight),
        grouping_tol=tol,
    )


def efficiency_distribution(joint: JointDistribution, tol: Optional[float] = None) -> EfficiencyDistribution:
    """
    Distribution of the stochastic efficiency eta = -(W1 + W3) / Q2.

    Args:
        joint: Normalized joint distribution of (W1, Q2, W3)
        tol: Zero/grouping tolerance (defaults to the joint's grouping_tol)

    Returns:
        EfficiencyDistribution with the 0/0 mass reported separately
    """
    tol = joint.grouping_tol if tol is None else tol
    w1, q2, w3, prob = joint.as_arrays()
    eta, zero_over_zero = classify_efficiency(w1, q2, w3, tol)
    routed = math.fsum(prob[zero_over_zero])

    distribution = build_efficiency_distribution(eta, prob, routed, tol)
    log_operation_call(
        logger,
        "efficiency_distribution",
        {"atoms": len(distribution.atoms), "infinity_mass": distribution.infinity_mass, "zero_over_zero": routed},
    )
    return distribution
