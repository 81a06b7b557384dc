# Sampler package initialization
"""
Monte Carlo sampling of single-cycle trajectories and statistical
comparison with the exact efficiency distribution.
"""

from otto_engine.sampler.models import CycleRecord, EmpiricalAtom, EmpiricalDistribution, GoodnessOfFit
from otto_engine.sampler.monte_carlo import (
    CycleSampler,
    estimate_efficiency_distribution,
    goodness_of_fit,
    make_generator,
    sample_cycle,
    sample_cycles,
)

__all__ = [
    "CycleRecord",
    "CycleSampler",
    "EmpiricalAtom",
    "EmpiricalDistribution",
    "GoodnessOfFit",
    "estimate_efficiency_distribution",
    "goodness_of_fit",
    "make_generator",
    "sample_cycle",
    "sample_cycles",
]
