# Propagator package initialization
"""
Numerical time-ordered propagation of driven few-level Hamiltonians.
"""

from otto_engine.propagator.integrator import (
    convergence_report,
    default_steps,
    max_hamiltonian_norm,
    pauli_exponential,
    propagate,
)
from otto_engine.propagator.models import ConvergencePoint, ConvergenceReport
from otto_engine.propagator.protocols import (
    DrivingProtocol,
    compression_protocol,
    constant_protocol,
    expansion_protocol,
)

__all__ = [
    "ConvergencePoint",
    "ConvergenceReport",
    "DrivingProtocol",
    "compression_protocol",
    "constant_protocol",
    "convergence_report",
    "default_steps",
    "expansion_protocol",
    "max_hamiltonian_norm",
    "pauli_exponential",
    "propagate",
]
