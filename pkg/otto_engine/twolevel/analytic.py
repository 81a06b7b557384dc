"""
Analytic Two-Level Otto Engine
==============================
Closed-form results for the spin-1/2 engine driven by a rotating field of
growing amplitude:
- exact expansion and compression unitaries
- survival probability u = cos^2 I and adiabaticity A* = 1 - 2u
- mean work and heat, engine bounds and thermodynamic efficiency
- the six-point efficiency distribution
- adiabatic mean, variance, covariance and their temperature limits

The measurement basis of the two strokes is the sz basis with level index 0
the lower level (-nu) and index 1 the upper level (+nu); the statistics only
depend on |entries|^2 of the unitaries.

Thermal factors are evaluated through logistic populations
P_ground = 1 / (1 + exp(-2 beta nu)), which equal the cosh / (Z^0 Z^tau)
expressions of the closed forms without overflowing at large beta.
"""

import math
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import expit

from otto_engine.config import get_settings
from otto_engine.spectra.distributions import build_efficiency_distribution
from otto_engine.spectra.models import EfficiencyDistribution, EnergySpectrum, EngineSpec, Unitary
from otto_engine.twolevel.models import (
    EngineBounds,
    MeanEnergetics,
    TemperatureLimits,
    TwoLevelDerived,
    TwoLevelParams,
)
from otto_engine.utils.errors import InvalidInputError, PreconditionError, UndefinedResultError
from otto_engine.utils.logging_config import get_logger, log_operation_call

logger = get_logger("twolevel.analytic")

# Quadrature tolerance for user-supplied ramps.
QUAD_TOL = 1e-12


# =============================================================================
# STROKE DYNAMICS
# =============================================================================

def i_integral(params: TwoLevelParams, t: Optional[float] = None) -> float:
    """
    I(t) = -integral_0^t gamma(t') dt'.

    Closed form for the linear ramp, adaptive quadrature otherwise.
    """
    t = params.tau if t is None else t
    if params.ramp is None:
        return -(params.gamma1 * t + (params.gamma2 - params.gamma1) * t * t / (2.0 * params.tau))
    value, error = quad(params.ramp, 0.0, t, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200)
    if error > 1e3 * QUAD_TOL:
        logger.warning(f"ramp quadrature error estimate {error:.2e} above target")
    return -value


def derive(params: TwoLevelParams) -> TwoLevelDerived:
    """
    Level splittings and transition statistics of the strokes.

    nu = sqrt(4 gamma^2 + omega^2) / 2 at both ends of the ramp,
    u = cos^2 I(tau), v = sin^2 I(tau), A* = 1 - 2u.
    """
    omega = params.effective_omega
    gamma_start = params.gamma_at(0.0)
    gamma_end = params.gamma_at(params.tau)
    integral = i_integral(params)
    u = math.cos(integral) ** 2
    v = math.sin(integral) ** 2
    return TwoLevelDerived(
        omega=omega,
        nu0=math.sqrt(4.0 * gamma_start ** 2 + omega ** 2) / 2.0,
        nu_tau=math.sqrt(4.0 * gamma_end ** 2 + omega ** 2) / 2.0,
        i_integral=integral,
        u=min(max(u, 0.0), 1.0),
        v=min(max(v, 0.0), 1.0),
        a_star=min(max(1.0 - 2.0 * u, -1.0), 1.0),
    )


def _check_time(params: TwoLevelParams, t: float) -> None:
    slack = 1e-12 * params.tau
    if not -slack <= t <= params.tau + slack:
        raise InvalidInputError(f"t={t} outside the stroke [0, {params.tau}]")


def _expansion_matrix(params: TwoLevelParams, t: float) -> np.ndarray:
    omega = params.effective_omega
    integral = i_integral(params, t)
    phase = np.exp(-0.5j * omega * t)
    c, s = math.cos(integral), math.sin(integral)
    return np.array(
        [
            [phase * c, 1j * phase * s],
            [1j * np.conj(phase) * s, np.conj(phase) * c],
        ]
    )


def closed_form_unitary(params: TwoLevelParams, t: Optional[float] = None) -> Unitary:
    """
    Exact expansion propagator U_exp(t) from 0 to t (default t = tau).

    Raises:
        InvalidInputError: t outside [0, tau]
    """
    t = params.tau if t is None else t
    _check_time(params, t)
    return Unitary(entries=_expansion_matrix(params, t))


def compression_unitary(params: TwoLevelParams, t: Optional[float] = None) -> Unitary:
    """
    Exact propagator of H_com(t) = -H_exp(tau - t) from 0 to t (default tau).

    Driving the time-reversed Hamiltonian undoes the expansion between
    tau - t and tau, so U_com(t) = U_exp(tau - t) U_exp(tau)^dagger. The full
    stroke gives U_exp(tau)^dagger, whose transition probabilities equal
    those of the expansion.
    """
    t = params.tau if t is None else t
    _check_time(params, t)
    remaining = min(max(params.tau - t, 0.0), params.tau)
    full = _expansion_matrix(params, params.tau)
    return Unitary(entries=_expansion_matrix(params, remaining) @ full.conj().T)


def build_engine_spec(params: TwoLevelParams) -> EngineSpec:
    """Generic EngineSpec of the spin engine (levels -nu, +nu)."""
    derived = derive(params)
    return EngineSpec(
        spectrum_start=EnergySpectrum(levels=(-derived.nu0, derived.nu0)),
        spectrum_end=EnergySpectrum(levels=(-derived.nu_tau, derived.nu_tau)),
        u_expansion=closed_form_unitary(params),
        u_compression=compression_unitary(params),
        beta_cold=params.beta1,
        beta_hot=params.beta2,
    )


# =============================================================================
# MEAN ENERGETICS AND ENGINE REGION
# =============================================================================

def _tanh_pair(params: TwoLevelParams, derived: TwoLevelDerived):
    return math.tanh(params.beta1 * derived.nu0), math.tanh(params.beta2 * derived.nu_tau)


def mean_energetics(params: TwoLevelParams) -> MeanEnergetics:
    """
    <W1> = (nu_tau A* + nu0) tanh(b1 nu0)
    <W3> = (nu0 A* + nu_tau) tanh(b2 nu_tau)
    <Q2> = -nu_tau [tanh(b2 nu_tau) + tanh(b1 nu0) A*]
    """
    d = derive(params)
    t_cold, t_hot = _tanh_pair(params, d)
    return MeanEnergetics(
        w1=(d.nu_tau * d.a_star + d.nu0) * t_cold,
        w3=(d.nu0 * d.a_star + d.nu_tau) * t_hot,
        q2=-d.nu_tau * (t_hot + t_cold * d.a_star),
    )


def engine_bounds(params: TwoLevelParams) -> EngineBounds:
    """Bounds on A* from <Q2> > 0 and from positive mean work output."""
    d = derive(params)
    t_cold, t_hot = _tanh_pair(params, d)
    bound_heat = -t_hot / t_cold
    bound_work = -(d.nu0 * t_cold + d.nu_tau * t_hot) / (d.nu_tau * t_cold + d.nu0 * t_hot)
    return EngineBounds(
        bound_heat=bound_heat,
        bound_work=bound_work,
        a_star=d.a_star,
        satisfied=d.a_star <= min(bound_heat, bound_work),
    )


def engine_margin(params: TwoLevelParams) -> float:
    """min(bounds) - A*; positive inside the engine region."""
    bounds = engine_bounds(params)
    return min(bounds.bound_heat, bounds.bound_work) - bounds.a_star


def engine_window_edges(params: TwoLevelParams, tau_grid: Sequence[float]) -> List[float]:
    """
    Stroke durations where the binding engine inequality changes sign.

    Brackets sign changes of :func:`engine_margin` on ``tau_grid`` and
    refines each with Brent's method.
    """
    taus = [float(t) for t in tau_grid]
    margins = [engine_margin(params.with_tau(t)) for t in taus]
    edges = []
    for (a, fa), (b, fb) in zip(zip(taus, margins), zip(taus[1:], margins[1:])):
        if fa == 0.0:
            edges.append(a)
        elif fa * fb < 0:
            edges.append(brentq(lambda t: engine_margin(params.with_tau(t)), a, b, xtol=1e-12))
    return edges


def eta_th(params: TwoLevelParams) -> float:
    """
    Thermodynamic efficiency
    1 + (nu0/nu_tau) [tanh(b2 nu_tau) A* + tanh(b1 nu0)] / [tanh(b2 nu_tau) + tanh(b1 nu0) A*].

    Raises:
        UndefinedResultError: the denominator (proportional to <Q2>) vanishes
    """
    d = derive(params)
    t_cold, t_hot = _tanh_pair(params, d)
    denominator = t_hot + t_cold * d.a_star
    if abs(denominator) < 1e-12:
        raise UndefinedResultError("<Q2> vanishes; thermodynamic efficiency undefined")
    return 1.0 + (d.nu0 / d.nu_tau) * (t_hot * d.a_star + t_cold) / denominator


# =============================================================================
# EFFICIENCY DISTRIBUTION
# =============================================================================

def _populations(params: TwoLevelParams, d: TwoLevelDerived):
    x, y = params.beta1 * d.nu0, params.beta2 * d.nu_tau
    return expit(2 * x), expit(-2 * x), expit(2 * y), expit(-2 * y)


def efficiency_distribution_closed(params: TwoLevelParams, tol: Optional[float] = None) -> EfficiencyDistribution:
    """
    Closed-form efficiency distribution of the spin engine.

    With r = nu0/nu_tau, x = b1 nu0, y = b2 nu_tau and Z^0 Z^tau = 4 cosh x cosh y:

        eta = 0      : 2 [u^2 cosh(x+y) + v^2 cosh(x-y)] / (Z^0 Z^tau)   (all 0/0)
        eta = 1 - r  : 2 u^2 cosh(x-y) / (Z^0 Z^tau)
        eta = 1 + r  : 2 v^2 cosh(x+y) / (Z^0 Z^tau)
        eta = 1      : u v
        eta = -inf   : 2 u v e^{+x} cosh(y) / (Z^0 Z^tau)
        eta = +inf   : 2 u v e^{-x} cosh(y) / (Z^0 Z^tau)

    The infinity weights carry the u v factor; without it the six masses do
    not sum to one. Coincident values (r = 1 puts 1 - r on 0) are merged.
    """
    tol = get_settings().grouping_tol if tol is None else tol
    d = derive(params)
    u, v = d.u, d.v
    p_cold_g, p_cold_e, p_hot_g, p_hot_e = _populations(params, d)
    aligned = p_cold_g * p_hot_g + p_cold_e * p_hot_e  # 2 cosh(x+y) / Z0 Ztau
    crossed = p_cold_g * p_hot_e + p_cold_e * p_hot_g  # 2 cosh(x-y) / Z0 Ztau
    r = d.nu0 / d.nu_tau

    zero_over_zero = u * u * aligned + v * v * crossed
    values = [0.0, 1.0 - r, 1.0 + r, 1.0, -math.inf, math.inf]
    weights = [zero_over_zero, u * u * crossed, v * v * aligned, u * v, u * v * p_cold_g, u * v * p_cold_e]

    log_operation_call(logger, "efficiency_distribution_closed", {"u": u, "r": r})
    return build_efficiency_distribution(np.array(values), np.array(weights), zero_over_zero, tol)


# =============================================================================
# ADIABATIC MOMENTS
# =============================================================================

def is_adiabatic(params: TwoLevelParams, tol: Optional[float] = None) -> bool:
    """|u - 1| below the adiabatic gate."""
    tol = get_settings().adiabatic_tol if tol is None else tol
    return abs(derive(params).u - 1.0) < tol


def _require_adiabatic(params: TwoLevelParams) -> TwoLevelDerived:
    d = derive(params)
    if abs(d.u - 1.0) >= get_settings().adiabatic_tol:
        raise PreconditionError(f"adiabatic driving required (u = {d.u!r}); moments are undefined in general")
    return d


def adiabatic_mean(params: TwoLevelParams) -> float:
    """<eta> = 2 cosh(b1 nu0 - b2 nu_tau) (1 - nu0/nu_tau) / (Z^0 Z^tau)."""
    d = _require_adiabatic(params)
    p_cold_g, p_cold_e, p_hot_g, p_hot_e = _populations(params, d)
    return (p_cold_g * p_hot_e + p_cold_e * p_hot_g) * (1.0 - d.nu0 / d.nu_tau)


def adiabatic_mean_limits(params: TwoLevelParams) -> TemperatureLimits:
    """High-T limit eta_th / 2 and low-T limit eta_th (e^{-2 b2 nu_tau} + e^{-2 b1 nu0})."""
    d = derive(params)
    efficiency = 1.0 - d.nu0 / d.nu_tau
    x, y = params.beta1 * d.nu0, params.beta2 * d.nu_tau
    return TemperatureLimits(
        high_t=efficiency / 2.0,
        low_t=efficiency * (math.exp(-2.0 * y) + math.exp(-2.0 * x)),
    )


def adiabatic_variance(params: TwoLevelParams) -> float:
    """sigma^2 = (1/4)(1 - nu0/nu_tau)^2 [1 - tanh^2(nu0 b1) tanh^2(nu_tau b2)]."""
    d = _require_adiabatic(params)
    t_cold, t_hot = _tanh_pair(params, d)
    return 0.25 * (1.0 - d.nu0 / d.nu_tau) ** 2 * (1.0 - (t_cold * t_hot) ** 2)


def adiabatic_variance_limits(params: TwoLevelParams) -> TemperatureLimits:
    """
    High-T limit eta_th^2 / 4; low-T limit
    eta_th^2 (e^{2x} + e^{2y}) / (e^{2x+2y} + 2 e^{2x} + 2 e^{2y}).
    """
    d = derive(params)
    efficiency = 1.0 - d.nu0 / d.nu_tau
    x, y = params.beta1 * d.nu0, params.beta2 * d.nu_tau
    # numerator and denominator divided by e^{2x+2y}
    ex, ey = math.exp(-2.0 * x), math.exp(-2.0 * y)
    return TemperatureLimits(
        high_t=efficiency ** 2 / 4.0,
        low_t=efficiency ** 2 * (ey + ex) / (1.0 + 2.0 * ey + 2.0 * ex),
    )


def covariance_closed(params: TwoLevelParams) -> float:
    """
    Adiabatic Cov(Q2, eta) = eta_th nu_tau (tanh x - tanh y)(1 + tanh x tanh y) / 2,
    with x = b1 nu0, y = b2 nu_tau. Positive whenever <Q2> > 0.
    """
    d = _require_adiabatic(params)
    t_cold, t_hot = _tanh_pair(params, d)
    efficiency = 1.0 - d.nu0 / d.nu_tau
    return efficiency * d.nu_tau * (t_cold - t_hot) * (1.0 + t_cold * t_hot) / 2.0


# =============================================================================
# ADIABATIC DRIVING TIMES
# =============================================================================

def adiabatic_tau(gamma1: float, gamma2: float, k: int = 1) -> float:
    """Stroke duration with I(tau) = -k pi for the linear ramp, so u = 1."""
    if k < 1:
        raise InvalidInputError("k must be a positive integer")
    return 2.0 * k * math.pi / (gamma1 + gamma2)


def nearest_adiabatic_tau(params: TwoLevelParams) -> float:
    """Adiabatic stroke duration closest to ``params.tau`` (linear ramp only)."""
    if params.ramp is not None:
        raise InvalidInputError("adiabatic times are tabulated for the linear ramp only")
    k = max(1, round((params.gamma1 + params.gamma2) * params.tau / (2.0 * math.pi)))
    return adiabatic_tau(params.gamma1, params.gamma2, k)
