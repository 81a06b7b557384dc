"""
Engine Settings
===============
Numerical tolerances and runtime defaults, overridable from the environment
(or a ``.env`` file) in the same way the pipeline agent reads its config.
"""

import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

# Tolerances fixed by the distribution contracts.
NORMALIZATION_TOL = 1e-12
UNITARITY_TOL = 1e-10
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class EngineSettings:
    """Tunable numerical settings for the library and CLI."""
    grouping_tol: float = 1e-9
    definedness_tol: float = 1e-12
    adiabatic_tol: float = 1e-9
    steps_per_unit: float = 1e4
    output_dir: str = "output"
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "EngineSettings":
        """Create settings from environment variables."""
        load_dotenv()
        return cls(
            grouping_tol=float(os.getenv("OTTO_GROUPING_TOL", "1e-9")),
            definedness_tol=float(os.getenv("OTTO_DEFINEDNESS_TOL", "1e-12")),
            adiabatic_tol=float(os.getenv("OTTO_ADIABATIC_TOL", "1e-9")),
            steps_per_unit=float(os.getenv("OTTO_STEPS_PER_UNIT", "1e4")),
            output_dir=os.getenv("OTTO_OUTPUT_DIR", "output"),
            log_level=os.getenv("OTTO_LOG_LEVEL", "INFO"),
        )


@lru_cache(maxsize=1)
def get_settings() -> EngineSettings:
    """Get the process-wide settings (read once from the environment)."""
    return EngineSettings.from_env()
