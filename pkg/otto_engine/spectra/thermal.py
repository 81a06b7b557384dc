"""
Thermal States and Transition Probabilities
===========================================
Gibbs populations of a spectrum and the stroke transition matrices that
feed every two-projective-measurement distribution.
"""

import math

import numpy as np
from scipy.special import logsumexp

from otto_engine.config import UNITARITY_TOL
from otto_engine.spectra.models import EnergySpectrum, ThermalState, Unitary
from otto_engine.utils.errors import InvalidInputError
from otto_engine.utils.logging_config import get_logger, log_operation_call

logger = get_logger("spectra.thermal")


def thermal_state(spectrum: EnergySpectrum, beta: float) -> ThermalState:
    """
    Boltzmann populations exp(-beta E_n) / Z of a spectrum.

    Energies are shifted by the ground energy before exponentiation so the
    exponents are never positive; log Z is returned alongside Z.

    Args:
        spectrum: Energy levels
        beta: Inverse temperature (> 0)

    Returns:
        ThermalState with weights summing to one

    Raises:
        InvalidInputError: beta not finite and positive
    """
    if beta is None or not math.isfinite(beta) or beta <= 0:
        raise InvalidInputError(f"beta must be finite and positive, got {beta}")

    energies = spectrum.energies
    ground = float(np.min(energies))
    exponents = -beta * (energies - ground)
    log_z_shifted = float(logsumexp(exponents))
    weights = np.exp(exponents - log_z_shifted)
    # renormalize the rounding residue so the sum is 1 to machine precision
    weights = weights / math.fsum(weights)

    log_z = log_z_shifted - beta * ground
    partition_function = math.exp(log_z) if log_z < 700.0 else math.inf

    log_operation_call(logger, "thermal_state", {"beta": beta, "dimension": spectrum.dimension})
    return ThermalState(
        beta=beta,
        weights=tuple(float(w) for w in weights),
        partition_function=partition_function,
        log_partition_function=log_z,
    )


def transition_matrix(u: Unitary) -> np.ndarray:
    """
    Transition probabilities of a stroke.

    ``T[n, m] = |<m|U|n>|^2`` is the probability to go from level n to
    level m; rows and columns each sum to one.

    Args:
        u: Stroke unitary in the energy eigenbasis

    Returns:
        Doubly stochastic (d, d) array
    """
    probabilities = np.abs(u.entries.T) ** 2
    drift = max(
        float(np.max(np.abs(probabilities.sum(axis=0) - 1.0))),
        float(np.max(np.abs(probabilities.sum(axis=1) - 1.0))),
    )
    if drift > UNITARITY_TOL:
        logger.warning(f"transition matrix deviates from double stochasticity by {drift:.3e}")
    return probabilities
