"""Thermodynamics of the competing Gibbs states.

Critical fields, specific-heat anomalies and reduced free energies of the
film phase and the standard BCS phase, and the choice of the phase with the
lowest Helmholtz free energy. Reduced temperatures are ``tau = T / Tc`` for
the film phase and ``tau' = T / Tc'`` for the standard one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import integrate

from . import gap
from .errors import ConsistencyError, DomainError, NumericError
from .material import EULER_GAMMA, EXP_GAMMA, HBAR, K_B, ZETA3

PHI_AT_ONE = 9.0 * ZETA3
STANDARD_CV_JUMP = 12.0 / (7.0 * ZETA3)
_U_MAX = 40.0
# above this tau the 0/0 form of the specific heat is replaced by its limit
_CV_SWITCH = 1.0 - 1e-6


class Phase(enum.Enum):
    NORMAL = "normal"
    STANDARD = "standard"
    NOVEL = "novel"


# --------------------------------------------------------------------------
# phi(eta)
# --------------------------------------------------------------------------

def _phi_u(u_max):
    # x = tanh(u) turns (ln((1+x)/(1-x)))^3 dx into 8 u^3 sech^2(u) du
    u_max = min(u_max, _U_MAX)
    if u_max <= 0:
        return 0.0
    value, abserr = integrate.quad(lambda u: u**3 / math.cosh(u) ** 2, 0.0, u_max,
                                   epsabs=1e-15, epsrel=1e-13, limit=200)
    if abserr > 1e-11:
        raise NumericError("phi quadrature did not converge", abserr)
    return 8.0 * value


def phi(eta_val):
    """``int_0^eta (ln((1+x)/(1-x)))^3 dx`` for ``0 <= eta <= 1``."""
    if not 0.0 <= eta_val <= 1.0:
        raise DomainError(f"phi is defined on [0, 1], got {eta_val!r}")
    if eta_val == 1.0:
        return _phi_u(_U_MAX)
    return _phi_u(math.atanh(eta_val))


def _eta_phi(tau):
    """``eta(tau)`` and ``phi(eta(tau))``, using ``atanh(eta) = eta / tau`` at the root."""
    if tau <= 0:
        return 1.0, _phi_u(_U_MAX)
    e = gap.eta(tau)
    return e, (_phi_u(e / tau) if e > 0 else 0.0)


def condensation_shape(tau):
    """``eta^4 - tau^3 phi(eta) / 2``: the free-energy gain in units of its T = 0 value."""
    if tau >= 1:
        return 0.0
    e, ph = _eta_phi(tau)
    rad = e**4 - 0.5 * tau**3 * ph
    if rad < -1e-9:
        raise ConsistencyError(f"negative condensation energy {rad:.3e} at tau={tau}")
    return max(rad, 0.0)


# --------------------------------------------------------------------------
# normal representation
# --------------------------------------------------------------------------

class Rep1Average(NamedTuple):
    """First-order ``<H_I>`` of the normal representation divided by ``k_B T``.

    ``extensive`` is False: the value does not grow with the volume, so the
    grand potential density equals the ideal-gas one.
    """

    value: float
    extensive: bool = False


def hi_average_rep1(T, gN0, T_D):
    """``-gN0 (ln[(1+t)/(1-t)] - t)`` with ``t = tanh(T_D / 2T)``.

    The logarithm equals ``T_D / T`` exactly, which keeps large ``T_D / T``
    finite.
    """
    if T <= 0:
        raise DomainError("temperature must be positive")
    u = 0.5 * T_D / T
    return Rep1Average(-gN0 * (2.0 * u - math.tanh(u)))


# --------------------------------------------------------------------------
# critical fields
# --------------------------------------------------------------------------

def hc_ratio_novel(tau):
    """``H_c(T) / H_c(0)`` of the film phase."""
    if tau < 0:
        raise DomainError("tau must be non-negative")
    return math.sqrt(condensation_shape(tau))


# unit conversions SI -> Gaussian
_ERG = 1e7
_CM3 = 1e6


def hc0_novel(g, epsilon_F, m, N0, T_c):
    """Zero-temperature critical field of the film phase, gauss.

    Inputs in SI (``g`` J m^3, ``epsilon_F`` J, ``m`` kg, ``N0`` 1/(J m^3),
    ``T_c`` K). Both algebraic forms are evaluated and must agree.
    """
    for name, v in dict(g=g, epsilon_F=epsilon_F, m=m, N0=N0, T_c=T_c).items():
        if not v > 0:
            raise DomainError(f"{name} must be positive")
    g_cgs = g * _ERG * _CM3
    eF = epsilon_F * _ERG
    m_cgs = m * 1e3
    hbar = HBAR * _ERG
    N0_cgs = N0 / (_ERG * _CM3)
    kTc = K_B * T_c * _ERG
    via_mass = math.sqrt(g_cgs * eF / (3 * math.pi)) * (m_cgs / hbar**2) ** 1.5 * kTc
    via_dos = 2 * math.pi**2 * math.sqrt(g_cgs / (6 * math.pi)) * N0_cgs * kTc
    if abs(via_mass / via_dos - 1.0) > 1e-8:
        raise ConsistencyError(
            f"critical-field forms disagree: {via_mass:.12g} vs {via_dos:.12g} G; "
            "check that N0 matches m and epsilon_F")
    return via_dos


def hc0_standard(N0, T_c_prime):
    """Zero-temperature BCS critical field ``pi e^-gamma sqrt(4 pi N0) k_B Tc'``, gauss."""
    N0_cgs = N0 / (_ERG * _CM3)
    return math.pi * math.exp(-EULER_GAMMA) * math.sqrt(4 * math.pi * N0_cgs) * K_B * T_c_prime * _ERG


def field_ratio(Tc, Tc_prime, gN0):
    """``H_c(0) / H_c'(0) = e^gamma (Tc / Tc') sqrt(gN0 / 6)``."""
    return EXP_GAMMA * (Tc / Tc_prime) * math.sqrt(gN0 / 6.0)


def coupling_integral_field(tau_prime, gN0=0.2):
    """Standard-phase ``H_c'(T) / H_c'(0)`` from the coupling-constant integral.

    ``H_c^2(T)`` is proportional to ``int dg'/g'^2 Delta^2(g', T)``; with
    ``u = 1/(g'N0)`` it becomes ``int Delta^2 du`` from ``1/gN0`` up to the
    coupling at which ``T`` is critical. At ``T = 0`` the integral is
    ``coth(1/gN0) - 1``.
    """
    if not 0.0 <= tau_prime:
        raise DomainError("tau' must be non-negative")
    if tau_prime >= 1:
        return 0.0
    norm = 1.0 / math.tanh(1.0 / gN0) - 1.0
    if tau_prime == 0:
        return 1.0
    t = tau_prime * gap.bcs_tc(gN0).numeric
    u_c = gap.linearized_gap_integral(t)
    value, abserr = integrate.quad(lambda u: gap.bcs_gap_at(t, 1.0 / u) ** 2,
                                   1.0 / gN0, u_c, epsabs=0.0, epsrel=1e-8, limit=200)
    if abserr > 1e-6 * max(value, norm * 1e-12):
        raise NumericError("coupling-constant integral did not converge", abserr)
    return math.sqrt(value / norm)


def hc_standard(tau_prime, mode="two_fluid", gN0=0.2):
    """``H_c'(T) / H_c'(0)`` of the standard phase.

    ``mode="two_fluid"`` is ``1 - tau'^2``; ``mode="coupling_integral"`` is
    :func:`coupling_integral_field`.
    """
    if tau_prime < 0:
        raise DomainError("tau' must be non-negative")
    if mode == "two_fluid":
        return max(1.0 - tau_prime**2, 0.0)
    if mode == "coupling_integral":
        return coupling_integral_field(tau_prime, gN0)
    raise ValueError(f"unknown mode {mode!r}")


# --------------------------------------------------------------------------
# specific heat
# --------------------------------------------------------------------------

class HeatAnomaly(NamedTuple):
    raw: float  # (C_s - C_n) / C_n
    R_C: float  # raw * 8 / (3 gN0)


def specific_heat_ratio_novel(tau, gN0):
    """Specific-heat anomaly of the film phase.

    ``1 - eta^2`` is evaluated as ``sech^2(eta/tau)`` to avoid cancellation;
    for ``tau > 1 - 1e-6`` the linear limit ``9 (1 - tau)`` is used.
    """
    if not gN0 > 0:
        raise DomainError("gN0 must be positive")
    if not 0.0 < tau:
        raise DomainError("tau must be positive")
    if tau >= 1.0:
        R = 0.0
    elif tau > _CV_SWITCH:
        R = 9.0 * (1.0 - tau)
    else:
        e, ph = _eta_phi(tau)
        x = e / tau
        sech2 = 1.0 / math.cosh(x) ** 2 if x < 350 else 0.0
        denom = tau - sech2
        if denom <= 0:
            raise ConsistencyError(f"specific-heat denominator {denom:.3e} at tau={tau}")
        R = (2.0 / tau**2) * e**4 * sech2 / denom - 0.5 * tau * ph
    return HeatAnomaly(raw=3.0 * gN0 / 8.0 * R, R_C=R)


def specific_heat_standard(tau_prime):
    """Reference anomaly ``(C_s' - C_n) / C_n`` of the standard phase.

    Only the two limiting branches are reproduced: the universal jump
    ``12 / (7 zeta(3))`` for ``tau' >= 1/2`` and ``-1`` below that. Zero at and
    above ``Tc'``.
    """
    if not tau_prime > 0:
        raise DomainError("tau' must be positive")
    if tau_prime >= 1.0:
        return 0.0
    return STANDARD_CV_JUMP if tau_prime >= 0.5 else -1.0


class TransitionSignature(NamedTuple):
    jump: float
    left_slope: float
    order: int


def novel_transition_signature(gN0, h=1e-4):
    """Jump and left slope of ``R_C`` at ``Tc``; continuous C with a kink is order 3."""
    at_tc = specific_heat_ratio_novel(1.0 - 1e-12, gN0).raw
    slope = (specific_heat_ratio_novel(1.0, gN0).R_C
             - specific_heat_ratio_novel(1.0 - h, gN0).R_C) / h
    order = 2 if abs(at_tc) > 1e-9 else (3 if abs(slope) > 1e-9 else 4)
    return TransitionSignature(jump=at_tc, left_slope=slope, order=order)


def standard_transition_signature():
    return TransitionSignature(jump=STANDARD_CV_JUMP, left_slope=math.nan, order=2)


# --------------------------------------------------------------------------
# free energies and phase choice
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CompetitionParams:
    """Inputs that fix both superconducting free energies."""

    Tc: float
    Tc_prime: float
    gN0: float

    def __post_init__(self):
        if not (self.Tc > 0 and self.Tc_prime > 0 and self.gN0 > 0):
            raise DomainError("Tc, Tc' and gN0 must be positive")

    @property
    def field_ratio(self):
        return field_ratio(self.Tc, self.Tc_prime, self.gN0)

    @property
    def novel_condition(self):
        """``Tc > e^-gamma sqrt(6 / gN0) Tc'``."""
        return self.Tc > math.exp(-EULER_GAMMA) * math.sqrt(6.0 / self.gN0) * self.Tc_prime


def df_novel(T, params: CompetitionParams):
    """Reduced free-energy difference of the film phase, in units of ``H_c'(0)^2 / 8 pi``."""
    tau = T / params.Tc
    return -params.field_ratio**2 * condensation_shape(tau) if tau < 1 else 0.0


def df_standard(T, params: CompetitionParams):
    """Two-fluid ``-(1 - tau'^2)^2`` of the standard phase."""
    tau_p = T / params.Tc_prime
    return -((1.0 - tau_p**2) ** 2) if tau_p < 1 else 0.0


class FreeEnergyCurves(NamedTuple):
    T: np.ndarray
    df_novel: np.ndarray
    df_standard: np.ndarray


def free_energy_curves(T_grid, Tc, Tc_prime, gN0):
    params = CompetitionParams(Tc, Tc_prime, gN0)
    T = np.asarray(T_grid, dtype=float)
    return FreeEnergyCurves(
        T=T,
        df_novel=np.array([df_novel(t, params) for t in T]),
        df_standard=np.array([df_standard(t, params) for t in T]),
    )


@dataclass(frozen=True)
class PhaseVerdict:
    T: float
    winner: Phase
    margins: dict = field(default_factory=dict)
    tc_condition: bool = False


def phase_select(T, params: CompetitionParams, tol=1e-12):
    """Phase with the lowest free energy at ``T``; the normal state sits at 0."""
    margins = {Phase.NORMAL: 0.0,
               Phase.STANDARD: df_standard(T, params),
               Phase.NOVEL: df_novel(T, params)}
    best = min((Phase.STANDARD, Phase.NOVEL), key=lambda p: margins[p])
    winner = best if margins[best] < -tol else Phase.NORMAL
    condition = params.novel_condition
    ratio = params.field_ratio
    if abs(ratio - 1.0) > 1e-12 and condition != (ratio > 1.0):
        raise ConsistencyError("critical-temperature condition disagrees with the field ratio")
    return PhaseVerdict(T=T, winner=winner, margins=margins, tc_condition=condition)


# --------------------------------------------------------------------------
# grand potential: coupling integral versus closed form
# --------------------------------------------------------------------------

class OmegaCheck(NamedTuple):
    tau: float
    numeric: float
    closed_form: float
    residual: float


def omega_difference_check(T, G, T_F):
    """Compare the coupling-constant integral of ``<H_I>`` with the closed form.

    Both are reported as multiples of
    ``-V g epsilon_F (k_B Tc)^2 (m / hbar^2)^3 / (24 pi^2)``. With
    ``s = G'/G`` the integral reads ``3 int_tau^1 s^2 eta(tau/s)^4 ds``; the
    closed form is ``eta^4 - tau^3 phi(eta) / 2``.
    """
    Tc = gap.novel_tc(G, T_F)
    tau = T / Tc
    if not 0 <= tau < 1:
        raise DomainError("omega_difference_check needs 0 <= T < Tc")
    value, abserr = integrate.quad(lambda s: s**2 * gap.eta(tau / s) ** 4, tau, 1.0,
                                   epsabs=0.0, epsrel=1e-10, limit=200)
    if abserr > 1e-8 * max(value, 1e-300):
        raise NumericError("grand-potential quadrature did not converge", abserr)
    numeric = 3.0 * value
    closed = condensation_shape(tau)
    residual = abs(numeric - closed) / abs(closed) if closed else abs(numeric)
    return OmegaCheck(tau=tau, numeric=numeric, closed_form=closed, residual=residual)


class SumRuleCheck(NamedTuple):
    tau: float
    heat_integral: float
    entropy: float
    residual: float


def entropy_sum_rule(tau, gN0=0.2):
    """Thermodynamic consistency of the specific heat with the free energy.

    With ``C_n`` linear in ``T`` the integral ``int_tau^1 R_C ds`` equals the
    reduced entropy gap ``-h'(tau)/6 = tau^2 phi(eta) / 4``, where ``h`` is
    :func:`condensation_shape`. The ``phi'`` term of ``h'`` cancels the
    ``eta'`` term exactly.
    """
    if not 0 < tau < 1:
        raise DomainError("entropy_sum_rule needs 0 < tau < 1")
    value, abserr = integrate.quad(lambda s: specific_heat_ratio_novel(s, gN0).R_C, tau, 1.0,
                                   epsabs=1e-13, epsrel=1e-11, limit=200, points=[_CV_SWITCH])
    if abserr > 1e-8:
        raise NumericError("specific-heat integral did not converge", abserr)
    entropy = 0.25 * tau**2 * _eta_phi(tau)[1]
    return SumRuleCheck(tau, value, entropy, abs(value - entropy) / entropy)


def hi_average_novel_shape(s, tau):
    """Integrand of the coupling integral, ``-s^2 eta(tau/s)^4``; never positive."""
    return -(s**2) * gap.eta(tau / s) ** 4


# --------------------------------------------------------------------------
# curves
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ThermoCurve:
    phase: Phase
    tau: np.ndarray
    eta: np.ndarray
    R_H: np.ndarray
    R_C: np.ndarray
    delta_f: np.ndarray
    params: dict


def novel_curve(tau, params: CompetitionParams):
    tau = np.asarray(tau, dtype=float)
    R_H = np.array([hc_ratio_novel(t) for t in tau])
    return ThermoCurve(
        phase=Phase.NOVEL,
        tau=tau,
        eta=gap.eta_curve(tau),
        R_H=R_H,
        R_C=np.array([specific_heat_ratio_novel(t, params.gN0).R_C if t > 0 else 0.0 for t in tau]),
        delta_f=-(params.field_ratio * R_H) ** 2,
        params=dict(gN0=params.gN0, Tc=params.Tc, Tc_prime=params.Tc_prime),
    )


def standard_curve(tau_prime, gN0=0.2, mode="two_fluid"):
    """Standard phase on a ``tau'`` grid; ``eta`` holds ``Delta(T) / Delta(0)``."""
    tau_prime = np.asarray(tau_prime, dtype=float)
    tc = gap.bcs_tc(gN0).numeric
    d0 = gap.bcs_gap_at(0.0, gN0)
    R_H = np.array([hc_standard(t, mode, gN0) for t in tau_prime])
    return ThermoCurve(
        phase=Phase.STANDARD,
        tau=tau_prime,
        eta=np.array([gap.bcs_gap_at(min(t, 1.0) * tc, gN0) / d0 for t in tau_prime]),
        R_H=R_H,
        R_C=np.array([specific_heat_standard(t) if t > 0 else -1.0 for t in tau_prime]),
        delta_f=-(R_H**2),
        params=dict(gN0=gN0, Tc_prime=tc, mode=mode),
    )


def normal_curve(tau):
    tau = np.asarray(tau, dtype=float)
    zero = np.zeros_like(tau)
    return ThermoCurve(Phase.NORMAL, tau, zero, zero, zero, zero, params={})
