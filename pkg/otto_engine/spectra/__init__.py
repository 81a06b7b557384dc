# Spectra package initialization
"""
Spectral Core
=============
Generic finite-dimensional two-projective-measurement machinery:
- thermal states and transition matrices
- joint work/heat distribution of an Otto cycle
- stochastic efficiency distribution with atoms at +/-inf
- moments, covariance and engine-condition checks
"""

from otto_engine.spectra.distributions import (
    classify_efficiency,
    conditional_heat_distribution,
    conditional_work3_distribution,
    efficiency_distribution,
    heat2_distribution,
    joint_distribution,
    work1_distribution,
    work3_distribution,
)
from otto_engine.spectra.models import (
    CovarianceReport,
    EfficiencyAtom,
    EfficiencyDistribution,
    EnergyAtom,
    EnergySpectrum,
    EngineConditions,
    EngineSpec,
    JointAtom,
    JointDistribution,
    MomentReport,
    ThermalState,
    Unitary,
)
from otto_engine.spectra.moments import (
    carnot_efficiency,
    efficiency_heat_covariance,
    efficiency_moments,
    engine_conditions,
    mean_heat2,
    mean_work1,
    mean_work3,
    thermodynamic_efficiency,
)
from otto_engine.spectra.thermal import thermal_state, transition_matrix

__all__ = [
    "CovarianceReport",
    "EfficiencyAtom",
    "EfficiencyDistribution",
    "EnergyAtom",
    "EnergySpectrum",
    "EngineConditions",
    "EngineSpec",
    "JointAtom",
    "JointDistribution",
    "MomentReport",
    "ThermalState",
    "Unitary",
    "carnot_efficiency",
    "classify_efficiency",
    "conditional_heat_distribution",
    "conditional_work3_distribution",
    "efficiency_distribution",
    "efficiency_heat_covariance",
    "efficiency_moments",
    "engine_conditions",
    "heat2_distribution",
    "joint_distribution",
    "mean_heat2",
    "mean_work1",
    "mean_work3",
    "thermal_state",
    "thermodynamic_efficiency",
    "transition_matrix",
    "work1_distribution",
    "work3_distribution",
]
