# Two-level package initialization
"""
Analytic spin-1/2 Otto engine: exact strokes, mean energetics, engine
region, closed-form efficiency distribution and adiabatic moments.
"""

from otto_engine.twolevel.analytic import (
    adiabatic_mean,
    adiabatic_mean_limits,
    adiabatic_tau,
    adiabatic_variance,
    adiabatic_variance_limits,
    build_engine_spec,
    closed_form_unitary,
    compression_unitary,
    covariance_closed,
    derive,
    efficiency_distribution_closed,
    engine_bounds,
    engine_margin,
    engine_window_edges,
    eta_th,
    i_integral,
    is_adiabatic,
    mean_energetics,
    nearest_adiabatic_tau,
)
from otto_engine.twolevel.models import (
    EngineBounds,
    MeanEnergetics,
    TemperatureLimits,
    TwoLevelDerived,
    TwoLevelParams,
)

__all__ = [
    "EngineBounds",
    "MeanEnergetics",
    "TemperatureLimits",
    "TwoLevelDerived",
    "TwoLevelParams",
    "adiabatic_mean",
    "adiabatic_mean_limits",
    "adiabatic_tau",
    "adiabatic_variance",
    "adiabatic_variance_limits",
    "build_engine_spec",
    "closed_form_unitary",
    "compression_unitary",
    "covariance_closed",
    "derive",
    "efficiency_distribution_closed",
    "engine_bounds",
    "engine_margin",
    "engine_window_edges",
    "eta_th",
    "i_integral",
    "is_adiabatic",
    "mean_energetics",
    "nearest_adiabatic_tau",
]
