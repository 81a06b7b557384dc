"""
Driving Protocols
=================
Time-dependent Hamiltonians handed to the propagator. The spin engine's
expansion and compression strokes are provided with vectorized evaluation.
"""

from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from otto_engine.twolevel.models import TwoLevelParams
from otto_engine.utils.errors import InvalidInputError

HamiltonianFn = Callable[[float], np.ndarray]
HamiltonianBatchFn = Callable[[np.ndarray], np.ndarray]


class DrivingProtocol(BaseModel):
    """
    A Hamiltonian H(t) on [0, duration].

    ``hamiltonian_batch`` maps an array of N times to an (N, d, d) stack and
    is used when present; otherwise ``hamiltonian_at`` is called per time.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = Field(default="custom", description="Label used in logs")
    dimension: int = Field(..., ge=1, description="Hilbert space dimension")
    duration: float = Field(..., gt=0, description="Stroke duration")
    hamiltonian_at: HamiltonianFn = Field(..., description="t -> d x d Hermitian matrix")
    hamiltonian_batch: Optional[HamiltonianBatchFn] = Field(None, description="times -> (N, d, d) stack")

    def evaluate(self, times: Sequence[float]) -> np.ndarray:
        """Hamiltonians at ``times`` as a complex (N, d, d) array."""
        times = np.asarray(times, dtype=float)
        if self.hamiltonian_batch is not None:
            stack = np.asarray(self.hamiltonian_batch(times), dtype=complex)
        else:
            stack = np.array([np.asarray(self.hamiltonian_at(float(t)), dtype=complex) for t in times])
        expected = (times.size, self.dimension, self.dimension)
        if stack.shape != expected:
            raise InvalidInputError(f"protocol '{self.name}' returned shape {stack.shape}, expected {expected}")
        return stack


def _spin_hamiltonians(params: TwoLevelParams, times: np.ndarray) -> np.ndarray:
    # gamma(t) (cos wt sx + sin wt sy) + (w/2) sz
    omega = params.effective_omega
    gamma = np.asarray(params.gamma_at(times), dtype=float)
    rotation = np.exp(-1j * omega * times)
    stack = np.empty(times.shape + (2, 2), dtype=complex)
    stack[..., 0, 0] = omega / 2.0
    stack[..., 1, 1] = -omega / 2.0
    stack[..., 0, 1] = gamma * rotation
    stack[..., 1, 0] = gamma * np.conj(rotation)
    return stack


def expansion_protocol(params: TwoLevelParams) -> DrivingProtocol:
    """H_exp(t) of the rotating-field spin engine on [0, tau]."""

    def batch(times: np.ndarray) -> np.ndarray:
        return _spin_hamiltonians(params, np.asarray(times, dtype=float))

    return DrivingProtocol(
        name="expansion",
        dimension=2,
        duration=params.tau,
        hamiltonian_at=lambda t: batch(np.array([t]))[0],
        hamiltonian_batch=batch,
    )


def compression_protocol(params: TwoLevelParams) -> DrivingProtocol:
    """Time-reversed stroke H_com(t) = -H_exp(tau - t)."""

    def batch(times: np.ndarray) -> np.ndarray:
        return -_spin_hamiltonians(params, params.tau - np.asarray(times, dtype=float))

    return DrivingProtocol(
        name="compression",
        dimension=2,
        duration=params.tau,
        hamiltonian_at=lambda t: batch(np.array([t]))[0],
        hamiltonian_batch=batch,
    )


def constant_protocol(hamiltonian: np.ndarray, duration: float) -> DrivingProtocol:
    """Time-independent Hamiltonian, mainly for checks against exact exponentials."""
    matrix = np.asarray(hamiltonian, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidInputError(f"Hamiltonian must be square, got shape {matrix.shape}")

    def batch(times: np.ndarray) -> np.ndarray:
        return np.broadcast_to(matrix, (np.size(times),) + matrix.shape).copy()

    return DrivingProtocol(
        name="constant",
        dimension=matrix.shape[0],
        duration=duration,
        hamiltonian_at=lambda t: matrix,
        hamiltonian_batch=batch,
    )
