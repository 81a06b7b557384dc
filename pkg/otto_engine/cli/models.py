"""
Pydantic Models for CLI Reports
===============================
"""

from typing import List, Optional

from pydantic import BaseModel, Field


class CheckResult(BaseModel):
    """Outcome of one cross-validation check."""
    name: str = Field(..., description="Check identifier")
    passed: bool = Field(..., description="Residual within tolerance")
    residual: Optional[float] = Field(None, description="Worst residual found")
    tolerance: float = Field(..., description="Pass threshold")
    detail: str = Field(default="", description="Human-readable context")


class ValidationReport(BaseModel):
    """Result of the validate command."""
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]
