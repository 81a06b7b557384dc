"""
Pydantic Models for the Sampler
===============================
Single trajectories, empirical efficiency histograms and goodness-of-fit
reports of the Monte Carlo estimator.
"""

import math
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from otto_engine.spectra.models import ExtendedReal
from otto_engine.utils.errors import InvalidInputError


class CycleRecord(BaseModel):
    """One sampled cycle: measured level indices and the resulting energetics."""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=0, description="Level before expansion")
    m: int = Field(..., ge=0, description="Level after expansion")
    k: int = Field(..., ge=0, description="Level after the hot isochore")
    l: int = Field(..., ge=0, description="Level after compression")
    w1: float = Field(..., description="Expansion work")
    q2: float = Field(..., description="Absorbed heat")
    w3: float = Field(..., description="Compression work")
    eta: ExtendedReal = Field(..., description="Stochastic efficiency")


class EmpiricalAtom(BaseModel):
    """Observed efficiency value with its count."""
    model_config = ConfigDict(frozen=True)

    value: ExtendedReal = Field(..., description="Efficiency value, possibly +/-inf")
    count: int = Field(..., ge=0, description="Number of cycles")


class EmpiricalDistribution(BaseModel):
    """Histogram of sampled efficiencies over the exact support."""
    model_config = ConfigDict(frozen=True)

    atoms: List[EmpiricalAtom] = Field(..., description="Observed atoms, ordered -inf, finite, +inf")
    total: int = Field(..., ge=1, description="Number of sampled cycles")
    seed: Optional[int] = Field(None, description="Root seed of the generator streams")
    zero_over_zero_count: int = Field(default=0, ge=0, description="Cycles routed to eta=0 by 0/0 = 0")

    @model_validator(mode="after")
    def _check_counts(self) -> "EmpiricalDistribution":
        counted = sum(a.count for a in self.atoms)
        if counted != self.total:
            raise InvalidInputError(f"counts sum to {counted}, expected total {self.total}")
        return self

    def frequencies(self) -> Dict[float, float]:
        """Relative frequency per observed value."""
        return {a.value: a.count / self.total for a in self.atoms}

    @property
    def infinity_count(self) -> int:
        return sum(a.count for a in self.atoms if math.isinf(a.value))


class GoodnessOfFit(BaseModel):
    """Comparison of an empirical histogram with the exact distribution."""
    tv_distance: float = Field(..., ge=0, description="Total-variation distance over all atoms")
    chi2_stat: float = Field(..., ge=0, description="Pearson statistic over bins with expected count >= 5")
    dof: int = Field(..., ge=0, description="Degrees of freedom (bins - 1)")
    p_value: Optional[float] = Field(None, description="Upper tail of chi2(dof); None when dof = 0")
    rejected: bool = Field(..., description="p_value below the test level")
    level: float = Field(default=1e-3, description="Test level")
