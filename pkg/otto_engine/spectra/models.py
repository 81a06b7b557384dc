"""
Pydantic Models for the Spectral Core
=====================================
Defines the data structures of the generic two-projective-measurement
machinery:
- Spectra, unitaries and thermal states
- The engine specification
- Joint work/heat and efficiency distributions
- Moment, covariance and engine-condition reports

Units throughout: hbar = k_B = 1.
"""

import math
from typing import Annotated, List, Literal, Optional, Tuple

import numpy as np
from pydantic import AfterValidator, BaseModel, ConfigDict, Field, field_validator, model_validator

from otto_engine.config import NORMALIZATION_TOL, UNITARITY_TOL
from otto_engine.utils.atoms import merge_atoms
from otto_engine.utils.errors import InvalidInputError
from otto_engine.utils.logging_config import get_logger
from otto_engine.utils.validators import validate_finite, validate_positive, validate_unitary

logger = get_logger("spectra.models")


# =============================================================================
# EXTENDED REALS
# =============================================================================

def _reject_nan(value: float) -> float:
    if math.isnan(value):
        raise ValueError("efficiency value must not be NaN")
    return value


# Finite float or +/-inf; the infinity "tag" is the IEEE value itself.
ExtendedReal = Annotated[float, AfterValidator(_reject_nan)]


def format_extended(value: float) -> object:
    """Serialize an extended real: finite floats pass through, infinities become strings."""
    if math.isinf(value):
        return "+inf" if value > 0 else "-inf"
    return value


def parse_extended(value: object) -> float:
    """Inverse of :func:`format_extended`."""
    if isinstance(value, str):
        if value == "+inf":
            return math.inf
        if value == "-inf":
            return -math.inf
        raise InvalidInputError(f"unknown extended real literal: {value!r}")
    return float(value)


# =============================================================================
# SPECTRA AND OPERATORS
# =============================================================================

class EnergySpectrum(BaseModel):
    """Ordered energy eigenvalues of a Hamiltonian."""
    model_config = ConfigDict(frozen=True)

    levels: Tuple[float, ...] = Field(..., description="Energy eigenvalues, ascending")

    @field_validator("levels")
    @classmethod
    def _check_levels(cls, levels: Tuple[float, ...]) -> Tuple[float, ...]:
        is_valid, error = validate_finite(levels, "levels")
        if not is_valid:
            raise InvalidInputError(error)
        if any(b < a for a, b in zip(levels, levels[1:])):
            raise InvalidInputError("levels must be sorted ascending")
        return levels

    @property
    def dimension(self) -> int:
        return len(self.levels)

    @property
    def energies(self) -> np.ndarray:
        return np.asarray(self.levels, dtype=float)


class Unitary(BaseModel):
    """
    Square unitary matrix in the energy eigenbasis.

    Unitarity (max |U†U - I| <= 1e-10) is checked on construction and the
    stored array is read-only.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray = Field(..., description="d x d complex matrix")

    @field_validator("entries", mode="before")
    @classmethod
    def _check_entries(cls, entries) -> np.ndarray:
        matrix = np.array(entries, dtype=complex)
        is_valid, error = validate_unitary(matrix, UNITARITY_TOL)
        if not is_valid:
            raise InvalidInputError(error)
        matrix.setflags(write=False)
        return matrix

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dimension: int) -> "Unitary":
        return cls(entries=np.eye(dimension, dtype=complex))

    def dagger(self) -> "Unitary":
        return Unitary(entries=self.entries.conj().T)


class ThermalState(BaseModel):
    """Gibbs state populations of a spectrum at inverse temperature beta."""
    model_config = ConfigDict(frozen=True)

    beta: float = Field(..., gt=0, description="Inverse temperature")
    weights: Tuple[float, ...] = Field(..., description="Boltzmann weight per level")
    partition_function: float = Field(..., ge=0, description="Z = sum exp(-beta E_n); may over- or underflow, see log_partition_function")
    log_partition_function: float = Field(..., description="log Z (finite even when Z overflows)")

    @field_validator("weights")
    @classmethod
    def _check_weights(cls, weights: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(w < 0 for w in weights):
            raise InvalidInputError("thermal weights must be nonnegative")
        if abs(math.fsum(weights) - 1.0) > NORMALIZATION_TOL:
            raise InvalidInputError("thermal weights must sum to 1")
        return weights

    @property
    def populations(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


class EngineSpec(BaseModel):
    """Complete input of the generic Otto-cycle statistics."""
    model_config = ConfigDict(frozen=True)

    spectrum_start: EnergySpectrum = Field(..., description="E^0, spectrum before expansion")
    spectrum_end: EnergySpectrum = Field(..., description="E^tau, spectrum after expansion")
    u_expansion: Unitary = Field(..., description="Expansion stroke unitary")
    u_compression: Unitary = Field(..., description="Compression stroke unitary")
    beta_cold: float = Field(..., description="beta_1, cold bath inverse temperature")
    beta_hot: float = Field(..., description="beta_2, hot bath inverse temperature")

    @model_validator(mode="after")
    def _check_consistency(self) -> "EngineSpec":
        for name in ("beta_cold", "beta_hot"):
            is_valid, error = validate_positive(getattr(self, name), name)
            if not is_valid:
                raise InvalidInputError(error)

        dims = {
            self.spectrum_start.dimension,
            self.spectrum_end.dimension,
            self.u_expansion.dimension,
            self.u_compression.dimension,
        }
        if len(dims) != 1:
            raise InvalidInputError(f"dimension mismatch between spectra and unitaries: {sorted(dims)}")
        if self.dimension < 2:
            raise InvalidInputError("engine needs at least two levels")

        if not self.beta_cold > self.beta_hot:
            logger.warning(
                f"beta_cold={self.beta_cold} <= beta_hot={self.beta_hot}: outside the engine regime",
                extra={"extra_data": {"beta_cold": self.beta_cold, "beta_hot": self.beta_hot}},
            )
        return self

    @property
    def dimension(self) -> int:
        return self.spectrum_start.dimension


# =============================================================================
# DISTRIBUTIONS
# =============================================================================

class EnergyAtom(BaseModel):
    """Point mass of a work or heat distribution."""
    model_config = ConfigDict(frozen=True)

    value: float = Field(..., description="Energy value")
    prob: float = Field(..., ge=0, description="Probability")


class JointAtom(BaseModel):
    """One (W1, Q2, W3) outcome of a cycle."""
    model_config = ConfigDict(frozen=True)

    w1: float = Field(..., description="Expansion work")
    q2: float = Field(..., description="Heat absorbed on the hot isochore")
    w3: float = Field(..., description="Compression work")
    prob: float = Field(..., ge=0, description="Probability")


def _check_total(total: float, what: str) -> None:
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise InvalidInputError(f"{what} must be normalized, total mass = {total!r}")


class JointDistribution(BaseModel):
    """Joint distribution P(W1, Q2, W3) of one engine cycle."""
    model_config = ConfigDict(frozen=True)

    atoms: List[JointAtom] = Field(..., description="Merged (W1, Q2, W3) atoms")
    grouping_tol: float = Field(default=1e-9, gt=0, description="Merge tolerance on energies")

    @field_validator("atoms")
    @classmethod
    def _check_atoms(cls, atoms: List[JointAtom]) -> List[JointAtom]:
        _check_total(math.fsum(a.prob for a in atoms), "joint distribution")
        return atoms

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Return (w1, q2, w3, prob) arrays."""
        w1 = np.array([a.w1 for a in self.atoms])
        q2 = np.array([a.q2 for a in self.atoms])
        w3 = np.array([a.w3 for a in self.atoms])
        prob = np.array([a.prob for a in self.atoms])
        return w1, q2, w3, prob

    def expectation(self, axis: Literal["w1", "q2", "w3", "w"]) -> float:
        """Mean of W1, Q2, W3 or total work W = W1 + W3."""
        w1, q2, w3, prob = self.as_arrays()
        values = {"w1": w1, "q2": q2, "w3": w3, "w": w1 + w3}[axis]
        return float(np.sum(values * prob))

    def marginal(self, axis: Literal["w1", "q2", "w3", "w"]) -> List[EnergyAtom]:
        """Marginal distribution along one energy axis, merged within grouping_tol."""
        w1, q2, w3, prob = self.as_arrays()
        values = {"w1": w1, "q2": q2, "w3": w3, "w": w1 + w3}[axis]
        points, masses = merge_atoms(values, prob, self.grouping_tol)
        return [EnergyAtom(value=float(v), prob=float(p)) for v, p in zip(points, masses)]


class EfficiencyAtom(BaseModel):
    """Point mass of the stochastic efficiency on the extended real line."""
    model_config = ConfigDict(frozen=True)

    eta: ExtendedReal = Field(..., description="Efficiency value, possibly +/-inf")
    prob: float = Field(..., ge=0, description="Probability")


class EfficiencyDistribution(BaseModel):
    """
    Atomic distribution of the stochastic efficiency.

    Atoms are ordered -inf, finite ascending, +inf. ``zero_over_zero_weight``
    is the part of the eta = 0 atom that comes from 0/0 outcomes.
    """
    model_config = ConfigDict(frozen=True)

    atoms: List[EfficiencyAtom] = Field(..., description="Efficiency atoms")
    zero_over_zero_weight: float = Field(default=0.0, ge=0, description="Mass routed to eta=0 by 0/0 = 0")
    grouping_tol: float = Field(default=1e-9, gt=0, description="Merge tolerance on eta")

    @model_validator(mode="after")
    def _check_atoms(self) -> "EfficiencyDistribution":
        _check_total(math.fsum(a.prob for a in self.atoms), "efficiency distribution")
        finite = sorted(a.eta for a in self.atoms if math.isfinite(a.eta))
        if any(b - a <= self.grouping_tol for a, b in zip(finite, finite[1:])):
            raise InvalidInputError("finite efficiency atoms must be separated by more than grouping_tol")
        return self

    @property
    def support(self) -> List[float]:
        return [a.eta for a in self.atoms]

    @property
    def infinity_mass(self) -> float:
        return math.fsum(a.prob for a in self.atoms if math.isinf(a.eta))

    @property
    def total_mass(self) -> float:
        return math.fsum(a.prob for a in self.atoms)

    def finite_atoms(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return (eta, prob) arrays of the finite atoms."""
        finite = [a for a in self.atoms if math.isfinite(a.eta)]
        return np.array([a.eta for a in finite]), np.array([a.prob for a in finite])

    def prob_at(self, eta: float, tol: Optional[float] = None) -> float:
        """Mass at ``eta`` (0.0 when eta is not in the support)."""
        tol = self.grouping_tol if tol is None else tol
        for atom in self.atoms:
            if math.isinf(eta) or math.isinf(atom.eta):
                if atom.eta == eta:
                    return atom.prob
            elif abs(atom.eta - eta) <= tol:
                return atom.prob
        return 0.0


# =============================================================================
# REPORTS
# =============================================================================

class MomentReport(BaseModel):
    """Mean and variance of the efficiency, when defined."""
    model_config = ConfigDict(frozen=True)

    mean: Optional[float] = Field(None, description="<eta>")
    variance: Optional[float] = Field(None, description="<eta^2> - <eta>^2")
    defined: bool = Field(..., description="False when the infinity atoms carry weight")
    infinity_mass: float = Field(..., ge=0, description="Mass at +/-inf")

    @model_validator(mode="after")
    def _check_definedness(self) -> "MomentReport":
        present = self.mean is not None and self.variance is not None
        if present != self.defined:
            raise InvalidInputError("mean/variance must be present exactly when defined")
        return self


class EngineConditions(BaseModel):
    """Sign checks deciding whether the cycle works as a heat engine."""
    heat_in_positive: bool = Field(..., description="<Q2> > 0")
    work_out_positive: bool = Field(..., description="-(<W1> + <W3>) > 0")
    is_engine: bool = Field(..., description="Both conditions hold")
    mean_heat2: float = Field(..., description="<Q2>")
    mean_work_out: float = Field(..., description="-(<W1> + <W3>)")


class CovarianceReport(BaseModel):
    """Cov(Q2, eta) together with the residual of the mean-efficiency identity."""
    cov: Optional[float] = Field(None, description="Cov(Q2, eta)")
    identity_residual: Optional[float] = Field(
        None, description="|<eta> - eta_th + Cov/<Q2>|"
    )
    defined: bool = Field(..., description="False when efficiency moments are undefined")
