"""
Pydantic Models for the Propagator
==================================
Result records of the step-refinement study.
"""

from typing import List, Optional

from pydantic import BaseModel, Field


class ConvergencePoint(BaseModel):
    """One resolution of a step-refinement study."""
    steps: int = Field(..., ge=1, description="Number of midpoint steps")
    deviation: float = Field(..., ge=0, description="max |U_steps - U_finest| entrywise")
    norm_step: float = Field(..., ge=0, description="max ||H|| * step size")
    unstable: bool = Field(..., description="norm_step above 1; the step resolves the dynamics poorly")


class ConvergenceReport(BaseModel):
    """Deviations from the finest resolution and the observed order of accuracy."""
    points: List[ConvergencePoint] = Field(..., description="One entry per step count, finest last")
    observed_order: Optional[float] = Field(
        None, description="Smallest pairwise log-log slope above round-off; None when all deviations are round-off"
    )
    unstable: bool = Field(..., description="Any resolution flagged unstable")
