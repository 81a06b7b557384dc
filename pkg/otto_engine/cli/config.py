"""
Run Configuration
=================
JSON run-config files parsed into pydantic models. Command-line flags are
applied as overrides on the raw document before validation, so flags win
over file values and the merged result is validated once.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from otto_engine.config import get_settings
from otto_engine.spectra.models import EnergySpectrum, EngineSpec, Unitary
from otto_engine.twolevel.analytic import build_engine_spec
from otto_engine.twolevel.models import TwoLevelParams
from otto_engine.utils.errors import ConfigError, InvalidInputError
from otto_engine.utils.logging_config import get_logger
from otto_engine.utils.validators import validate_grid

logger = get_logger("cli.config")


# =============================================================================
# MODEL SOURCES
# =============================================================================

class TwoLevelSection(BaseModel):
    """Spin engine parameters; defaults are the nonadiabatic demonstration point."""
    gamma1: float = Field(default=0.5, gt=0)
    gamma2: float = Field(default=3.0, gt=0)
    tau: float = Field(default=2.39, gt=0)
    omega: Optional[float] = Field(default=None, gt=0, description="Default pi / (2 tau)")
    beta1: float = Field(default=2.0, gt=0)
    beta2: float = Field(default=0.1, gt=0)

    def to_params(self) -> TwoLevelParams:
        return TwoLevelParams(**self.model_dump())


def load_matrix(path: Path) -> np.ndarray:
    """
    Read a complex matrix from ``.npy`` or from JSON ``{"real": [[...]], "imag": [[...]]}``.

    Raises:
        ConfigError: unreadable file or malformed content
    """
    try:
        if path.suffix == ".npy":
            return np.asarray(np.load(path), dtype=complex)
        document = json.loads(path.read_text())
        real = np.asarray(document["real"], dtype=float)
        imag = np.asarray(document.get("imag", np.zeros_like(real)), dtype=float)
        if real.shape != imag.shape:
            raise ConfigError(f"{path}: real and imag parts differ in shape")
        return real + 1j * imag
    except (OSError, KeyError, ValueError, TypeError) as e:
        raise ConfigError(f"cannot read matrix from {path}: {e}") from e


class GenericSection(BaseModel):
    """Explicit spectra with unitaries read from files."""
    spectrum_start: List[float] = Field(..., min_length=2)
    spectrum_end: List[float] = Field(..., min_length=2)
    u_expansion: str = Field(..., description="Path to the expansion unitary")
    u_compression: str = Field(..., description="Path to the compression unitary")
    beta_cold: float = Field(..., gt=0)
    beta_hot: float = Field(..., gt=0)

    def matrix_paths(self, base_dir: Path) -> Dict[str, Path]:
        paths = {}
        for name in ("u_expansion", "u_compression"):
            path = Path(getattr(self, name))
            paths[name] = path if path.is_absolute() else base_dir / path
        return paths

    def load_matrices(self, base_dir: Path) -> Dict[str, np.ndarray]:
        """Raw matrices, not yet checked for unitarity."""
        return {name: load_matrix(path) for name, path in self.matrix_paths(base_dir).items()}

    def to_spec(self, base_dir: Path) -> EngineSpec:
        matrices = self.load_matrices(base_dir)
        return EngineSpec(
            spectrum_start=EnergySpectrum(levels=tuple(self.spectrum_start)),
            spectrum_end=EnergySpectrum(levels=tuple(self.spectrum_end)),
            u_expansion=Unitary(entries=matrices["u_expansion"]),
            u_compression=Unitary(entries=matrices["u_compression"]),
            beta_cold=self.beta_cold,
            beta_hot=self.beta_hot,
        )


# =============================================================================
# COMMAND SECTIONS
# =============================================================================

class GridSection(BaseModel):
    """A sweep grid: explicit ``values`` or ``points`` samples of [start, stop]."""
    start: Optional[float] = None
    stop: Optional[float] = None
    points: int = Field(default=51, ge=1)
    log_spaced: bool = False
    values: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_range(self) -> "GridSection":
        if self.values is None:
            if self.start is None or self.stop is None:
                raise ValueError("grid needs either values or start and stop")
            if self.points > 1 and not self.start < self.stop:
                raise ValueError("grid start must be below stop")
            if self.log_spaced and self.start <= 0:
                raise ValueError("log-spaced grid needs a positive start")
        is_valid, error = validate_grid(self.grid(), "grid")
        if not is_valid:
            raise ValueError(error)
        return self

    def grid(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.points == 1:
            return np.array([self.start], dtype=float)
        if self.log_spaced:
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


class SweepBetaSection(BaseModel):
    """Cold inverse-temperature grid with beta2 = beta1 / ratio."""
    beta1: GridSection = Field(default_factory=lambda: GridSection(start=0.01, stop=20.0, points=60, log_spaced=True))
    ratio: float = Field(default=10.0, gt=0, description="beta1 / beta2")


class SampleSection(BaseModel):
    """Monte Carlo options."""
    n_samples: int = Field(default=1_000_000, ge=1)
    seed: int = Field(default=42, ge=0)
    workers: int = Field(default=1, ge=1)
    chunk: int = Field(default=250_000, ge=1)
    level: float = Field(default=1e-3, gt=0, lt=1, description="Chi-square test level")
    reference_beta_cold: Optional[float] = Field(default=None, gt=0, description="Compare against another beta1")
    reference_beta_hot: Optional[float] = Field(default=None, gt=0, description="Compare against another beta2")


class ValidateSection(BaseModel):
    """Cross-check suite options."""
    tau: GridSection = Field(default_factory=lambda: GridSection(start=0.5, stop=10.0, points=51))
    convergence_steps: List[int] = Field(default_factory=lambda: [2000, 4000, 8000, 16000])


# =============================================================================
# RUN CONFIG
# =============================================================================

class RunConfig(BaseModel):
    """Complete input of one CLI command."""
    model: Literal["twolevel", "generic"] = "twolevel"
    twolevel: Optional[TwoLevelSection] = None
    generic: Optional[GenericSection] = None
    sweep_tau: GridSection = Field(default_factory=lambda: GridSection(start=2.0, stop=10.0, points=161))
    sweep_beta: SweepBetaSection = Field(default_factory=SweepBetaSection)
    sample: SampleSection = Field(default_factory=SampleSection)
    validate_suite: ValidateSection = Field(default_factory=ValidateSection, alias="validate")
    grouping_tol: Optional[float] = Field(default=None, gt=0)
    steps_per_unit: Optional[float] = Field(default=None, gt=0)
    output_dir: Optional[str] = None
    output: Optional[str] = Field(default=None, description="Explicit artifact path")
    base_dir: str = Field(default=".", description="Directory that relative matrix paths resolve against")

    model_config = ConfigDict(populate_by_name=True)

    @model_validator(mode="after")
    def _check_model_source(self) -> "RunConfig":
        if self.model == "twolevel":
            if self.generic is not None:
                raise ValueError("model 'twolevel' must not carry a generic section")
            if self.twolevel is None:
                self.twolevel = TwoLevelSection()
        elif self.generic is None or self.twolevel is not None:
            raise ValueError("model 'generic' needs a generic section and no twolevel section")
        return self

    @property
    def tol(self) -> float:
        return get_settings().grouping_tol if self.grouping_tol is None else self.grouping_tol

    def params(self) -> TwoLevelParams:
        """Two-level parameters; only valid for twolevel configs."""
        if self.model != "twolevel":
            raise ConfigError("this command needs a twolevel model")
        return self.twolevel.to_params()

    def engine_spec(self) -> EngineSpec:
        if self.model == "twolevel":
            return build_engine_spec(self.params())
        return self.generic.to_spec(Path(self.base_dir))

    def artifact_path(self, default_name: str) -> Path:
        """Explicit --output path, else <output_dir>/<default_name>."""
        if self.output:
            return Path(self.output)
        directory = self.output_dir or get_settings().output_dir
        return Path(directory) / default_name

    def describe(self) -> Dict[str, Any]:
        """Parameters echoed into artifacts."""
        if self.model == "twolevel":
            return {"model": "twolevel", **self.twolevel.model_dump()}
        return {"model": "generic", **self.generic.model_dump()}


# =============================================================================
# LOADING
# =============================================================================

def _set_dotted(document: Dict[str, Any], dotted: str, value: Any) -> None:
    keys = dotted.split(".")
    node = document
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"cannot override '{dotted}': '{key}' is not a section")
    node[keys[-1]] = value


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Build a RunConfig from an optional JSON file plus dotted-key overrides.

    Args:
        path: JSON run-config file (None uses the defaults)
        overrides: {"twolevel.tau": 7.18, "sample.seed": 1, ...}; None values are ignored

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: unreadable file or invalid merged configuration
    """
    document: Dict[str, Any] = {}
    if path is not None:
        config_path = Path(path)
        try:
            document = json.loads(config_path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {config_path}: {e}") from e
        if not isinstance(document, dict):
            raise ConfigError(f"config {config_path} must be a JSON object")
        document.setdefault("base_dir", str(config_path.parent))

    for dotted, value in (overrides or {}).items():
        if value is None:
            continue
        _set_dotted(document, dotted, value)

    try:
        config = RunConfig.model_validate(document)
    except (ValidationError, InvalidInputError) as e:
        raise ConfigError(f"invalid run configuration: {e}") from e

    logger.debug("Loaded run config", extra={"extra_data": config.model_dump(mode="json", by_alias=True)})
    return config

