"""
Pydantic Models for the Two-Level Engine
========================================
Parameters and derived quantities of the driven spin-1/2 Otto engine
H_exp(t) = gamma(t) (cos(wt) sx + sin(wt) sy) + (w/2) sz.
"""

import math
from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from otto_engine.utils.logging_config import get_logger

logger = get_logger("twolevel.models")

Ramp = Callable[[float], float]


class TwoLevelParams(BaseModel):
    """
    Input parameters of the spin engine.

    ``omega`` left as None follows the stroke duration, omega = pi / (2 tau),
    so copies with a new ``tau`` pick up the matching rotation frequency.
    ``ramp`` replaces the default linear ramp
    gamma(t) = gamma1 (1 - t/tau) + gamma2 t/tau.
    """
    model_config = ConfigDict(frozen=True)

    gamma1: float = Field(..., gt=0, description="Field strength at t = 0")
    gamma2: float = Field(..., gt=0, description="Field strength at t = tau")
    tau: float = Field(..., gt=0, description="Stroke duration")
    omega: Optional[float] = Field(None, gt=0, description="Rotation frequency (default pi / (2 tau))")
    beta1: float = Field(..., gt=0, description="Cold bath inverse temperature")
    beta2: float = Field(..., gt=0, description="Hot bath inverse temperature")
    ramp: Optional[Ramp] = Field(None, exclude=True, description="Custom gamma(t) on [0, tau]")

    @model_validator(mode="after")
    def _warn_outside_engine_regime(self) -> "TwoLevelParams":
        for name in ("gamma1", "gamma2", "tau", "beta1", "beta2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.beta1 > self.beta2:
            logger.warning(f"beta1={self.beta1} <= beta2={self.beta2}: outside the engine regime")
        return self

    @property
    def effective_omega(self) -> float:
        return math.pi / (2.0 * self.tau) if self.omega is None else self.omega

    def gamma_at(self, t):
        """Rotating-field amplitude gamma(t); accepts scalars or arrays."""
        if self.ramp is not None:
            if np.ndim(t) == 0:
                return float(self.ramp(float(t)))
            return np.array([self.ramp(float(s)) for s in np.ravel(t)]).reshape(np.shape(t))
        s = np.asarray(t, dtype=float) / self.tau
        value = self.gamma1 * (1.0 - s) + self.gamma2 * s
        return float(value) if np.ndim(t) == 0 else value

    def with_tau(self, tau: float) -> "TwoLevelParams":
        """Copy with a new stroke duration (validated)."""
        data = self.model_dump()
        data["tau"] = tau
        return TwoLevelParams(**data, ramp=self.ramp)


class TwoLevelDerived(BaseModel):
    """Level splittings, field integral and transition statistics of a stroke."""
    omega: float = Field(..., description="Rotation frequency used")
    nu0: float = Field(..., description="Half gap at t = 0")
    nu_tau: float = Field(..., description="Half gap at t = tau")
    i_integral: float = Field(..., description="I = -integral_0^tau gamma")
    u: float = Field(..., ge=0, le=1, description="Survival probability cos^2 I")
    v: float = Field(..., ge=0, le=1, description="Transition probability sin^2 I")
    a_star: float = Field(..., ge=-1, le=1, description="Adiabaticity parameter 1 - 2u")


class MeanEnergetics(BaseModel):
    """Closed-form averages of the cycle energetics."""
    w1: float = Field(..., description="<W1>")
    w3: float = Field(..., description="<W3>")
    q2: float = Field(..., description="<Q2>")


class EngineBounds(BaseModel):
    """Upper bounds on A* from the two heat-engine conditions."""
    bound_heat: float = Field(..., description="-tanh(b2 nu_tau) / tanh(b1 nu0)")
    bound_work: float = Field(..., description="Bound from positive work output")
    a_star: float = Field(..., description="Adiabaticity parameter at this point")
    satisfied: bool = Field(..., description="a_star <= min(bound_heat, bound_work)")


class TemperatureLimits(BaseModel):
    """High- and low-temperature asymptotes of an adiabatic moment."""
    high_t: float = Field(..., description="beta nu << 1 limit")
    low_t: float = Field(..., description="beta nu >> 1 limit")
