"""
Artifact Writers and Readers
============================
JSON and CSV outputs of the CLI.

JSON floats are written with Python's shortest round-trip repr, so re-reading
an artifact restores every value bit for bit; infinities are written as the
strings "+inf" and "-inf". CSV files are written through pandas with
``%.17g`` floats and empty fields for undefined values.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from otto_engine.sampler.models import EmpiricalDistribution, GoodnessOfFit
from otto_engine.spectra.models import (
    EfficiencyAtom,
    EfficiencyDistribution,
    MomentReport,
    format_extended,
    parse_extended,
)
from otto_engine.utils.errors import ConfigError
from otto_engine.utils.logging_config import get_logger

logger = get_logger("cli.artifacts")

CSV_FLOAT_FORMAT = "%.17g"


def finite_or_none(value: Optional[float]) -> Optional[float]:
    """NaN and infinities become None so CSV cells stay empty."""
    if value is None or not math.isfinite(value):
        return None
    return value


# =============================================================================
# DOCUMENTS
# =============================================================================

def distribution_to_dict(dist: EfficiencyDistribution) -> Dict[str, Any]:
    return {
        "support": [{"eta": format_extended(a.eta), "prob": a.prob} for a in dist.atoms],
        "zero_over_zero_mass": dist.zero_over_zero_weight,
        "grouping_tol": dist.grouping_tol,
    }


def moments_to_dict(report: MomentReport) -> Dict[str, Any]:
    document: Dict[str, Any] = {"defined": report.defined, "infinity_mass": report.infinity_mass}
    if report.defined:
        document["mean"] = report.mean
        document["variance"] = report.variance
    return document


def empirical_to_dict(empirical: EmpiricalDistribution) -> Dict[str, Any]:
    return {
        "atoms": [{"eta": format_extended(a.value), "count": a.count} for a in empirical.atoms],
        "total": empirical.total,
        "seed": empirical.seed,
        "zero_over_zero_count": empirical.zero_over_zero_count,
    }


def fit_to_dict(fit: GoodnessOfFit) -> Dict[str, Any]:
    return fit.model_dump()


# =============================================================================
# WRITERS
# =============================================================================

def write_json(payload: Dict[str, Any], path: Path) -> Path:
    """Write a JSON document; NaN or infinite floats are rejected."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, allow_nan=False) + "\n")
    logger.info(f"Wrote {path}")
    return path


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """Write a table with full-precision floats and empty missing values."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, na_rep="")
    logger.info(f"Wrote {path} ({len(frame)} rows)")
    return path


# =============================================================================
# READERS
# =============================================================================

def distribution_from_dict(document: Dict[str, Any]) -> EfficiencyDistribution:
    try:
        atoms = [EfficiencyAtom(eta=parse_extended(a["eta"]), prob=a["prob"]) for a in document["support"]]
        return EfficiencyDistribution(
            atoms=atoms,
            zero_over_zero_weight=document.get("zero_over_zero_mass", 0.0),
            grouping_tol=document.get("grouping_tol", 1e-9),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed distribution artifact: {e}") from e


def read_distribution_artifact(path: Path) -> EfficiencyDistribution:
    """Re-read the efficiency distribution written by the ``dist`` command."""
    try:
        document = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read artifact {path}: {e}") from e
    return distribution_from_dict(document)


def read_csv_artifact(path: Path) -> pd.DataFrame:
    """Re-read a sweep table; empty cells come back as NaN."""
    return pd.read_csv(path)
