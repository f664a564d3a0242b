"""Self-consistency equations of the three representations.

Normal state: no gap. Standard BCS: the constant-DOS gap equation in units
of the Debye energy. Film phase: the k-independent spectrum solving
``eta = tanh(eta / tau)`` plus the shell mode count that produces it.

Temperatures and energies are in kelvin (energy / k_B) unless a docstring
says otherwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, ModelViolationWarning, NumericError, SizeError
from .material import BCS_TC_PREFACTOR, K_B, Film, IsotropicBulk

# beyond this argument tanh is 1 to double precision
_TANH_SATURATION = 20.0
_QUAD_RTOL = 1e-10


# --------------------------------------------------------------------------
# standard BCS
# --------------------------------------------------------------------------

def _tanh_over_y(y):
    return np.tanh(y) / y if y > 0 else 1.0


def _quad(f, a, b):
    value, abserr = integrate.quad(f, a, b, epsabs=0.0, epsrel=_QUAD_RTOL, limit=400)
    if not abserr <= 100 * _QUAD_RTOL * max(abs(value), 1e-300):
        raise NumericError(f"quadrature on [{a}, {b}] did not converge", abserr)
    return value


def linearized_gap_integral(t):
    """``int_0^1 tanh(x / 2t) / x dx`` with ``t = T / T_D``."""
    if t <= 0:
        return math.inf
    upper = 0.5 / t
    if upper <= _TANH_SATURATION:
        return _quad(_tanh_over_y, 0.0, upper)
    return _quad(_tanh_over_y, 0.0, _TANH_SATURATION) + math.log(upper / _TANH_SATURATION)


def gap_integral(delta, t):
    """``int_0^1 tanh(E / 2t) / E dx`` with ``E = sqrt(x^2 + delta^2)``.

    Where ``E / 2t`` exceeds the tanh saturation point the remaining piece is
    the exact ``asinh`` antiderivative of ``1/E``.
    """
    if delta <= 0:
        return linearized_gap_integral(t)
    if t <= 0:
        return math.asinh(1.0 / delta)
    x_sat2 = (2.0 * _TANH_SATURATION * t) ** 2 - delta**2
    x_sat = math.sqrt(x_sat2) if x_sat2 > 0 else 0.0

    def integrand(x):
        E = math.hypot(x, delta)
        return math.tanh(E / (2.0 * t)) / E

    if x_sat >= 1.0:
        return _quad(integrand, 0.0, 1.0)
    head = _quad(integrand, 0.0, x_sat) if x_sat > 0 else 0.0
    return head + math.asinh(1.0 / delta) - math.asinh(x_sat / delta)


def _check_gN0(gN0, upper):
    if not 0 < gN0 <= upper:
        raise DomainError(f"gN0 must lie in (0, {upper}], got {gN0!r}")


def bcs_gap_at(T, gN0, T_D=1.0):
    """Gap in units of the Debye energy at temperature ``T``.

    Solves ``1 = gN0 * int_0^1 tanh(E / 2t) / E dx``; zero when only the trivial
    root exists.
    """
    _check_gN0(gN0, 1.0)
    if T < 0 or T_D <= 0:
        raise DomainError("need T >= 0 and T_D > 0")
    t = T / T_D
    if t == 0:
        return 1.0 / math.sinh(1.0 / gN0)
    if gN0 * linearized_gap_integral(t) <= 1.0:
        return 0.0

    def residual(delta):
        return gN0 * gap_integral(delta, t) - 1.0

    lo = 1e-12
    if residual(lo) <= 0:
        return 0.0
    delta, info = optimize.brentq(residual, lo, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps,
                                  full_output=True)
    if not info.converged:
        raise NumericError("gap root search failed", residual(delta))
    return delta


class CriticalTemperature(NamedTuple):
    numeric: float
    closed_form: float


def bcs_tc(gN0, T_D=1.0):
    """Critical temperature of the standard phase, numeric and weak-coupling form."""
    _check_gN0(gN0, 0.5)
    closed = BCS_TC_PREFACTOR * T_D * math.exp(-1.0 / gN0)

    def residual(t):
        return gN0 * linearized_gap_integral(t) - 1.0

    lo, hi = closed / T_D / 4.0, min(4.0 * closed / T_D, 10.0)
    if not residual(lo) > 0 > residual(hi):
        raise NumericError("critical temperature not bracketed", min(abs(residual(lo)), abs(residual(hi))))
    t = optimize.brentq(residual, lo, hi, xtol=1e-18, rtol=4 * np.finfo(float).eps)
    return CriticalTemperature(t * T_D, closed)


@dataclass(frozen=True)
class StandardGapSolution:
    gN0: float
    T_D: float
    T: np.ndarray
    Delta: np.ndarray
    Tc_numeric: float
    Tc_closed_form: float


def solve_standard(gN0, T_D=1.0, T=None, n_points=201):
    """Tabulate the standard gap on ``T`` (default: ``n_points`` up to ``Tc``)."""
    tc = bcs_tc(gN0, T_D)
    if T is None:
        T = np.linspace(0.0, tc.numeric, n_points)
    T = np.asarray(T, dtype=float)
    Delta = np.array([bcs_gap_at(t, gN0, T_D) for t in T])
    return StandardGapSolution(gN0, T_D, T, Delta, tc.numeric, tc.closed_form)


# --------------------------------------------------------------------------
# film phase
# --------------------------------------------------------------------------

def eta(tau):
    """Largest non-negative root of ``eta = tanh(eta / tau)``.

    ``tau = 0`` gives 1 and ``tau >= 1`` gives 0.
    """
    if tau < 0 or math.isnan(tau):
        raise DomainError(f"reduced temperature must be non-negative, got {tau!r}")
    if tau == 0:
        return 1.0
    if tau >= 1:
        return 0.0

    def f(x):
        return x - math.tanh(x / tau)

    lo = 1e-12
    if f(lo) >= 0:
        return 0.0
    if f(1.0) <= 0:
        return 1.0
    return optimize.brentq(f, lo, 1.0, xtol=1e-16, rtol=4 * np.finfo(float).eps)


def eta_curve(tau):
    """:func:`eta` over an array of reduced temperatures."""
    return np.array([eta(float(t)) for t in np.ravel(tau)]).reshape(np.shape(tau))


def novel_tc(G, T_F):
    """``Tc = G T_F``; zero coupling means no transition."""
    if G < 0 or T_F <= 0:
        raise DomainError("need G >= 0 and T_F > 0")
    return G * T_F


@dataclass(frozen=True)
class NovelSpectrum:
    """Quasiparticle spectrum of the film phase at one temperature (kelvin)."""

    T: float
    Tc: float
    epsilon0: float
    epsilon: float
    eta: float

    def energy(self, xi):
        """Quasiparticle energy: ``epsilon`` inside ``|xi| <= epsilon``, else ``xi``."""
        xi = np.asarray(xi, dtype=float)
        return np.where(np.abs(xi) <= self.epsilon, self.epsilon, xi)

    def gap(self, xi):
        """``Delta_k = sqrt(epsilon^2 - xi^2)`` inside the window, zero outside."""
        xi = np.asarray(xi, dtype=float)
        return np.sqrt(np.clip(self.epsilon**2 - xi**2, 0.0, None))


def epsilon_of_T(T, G, T_F, T_D=None):
    """Film-phase spectrum value at temperature ``T``.

    ``epsilon0 = 2 G T_F = 2 Tc`` and ``epsilon(T) = epsilon0 * eta(T / Tc)``. With
    ``T_D`` given, a spectrum above the Debye energy triggers
    :class:`ModelViolationWarning`.
    """
    if not G > 0:
        raise DomainError(f"effective coupling must be positive, got {G!r}")
    if T < 0:
        raise DomainError("temperature must be non-negative")
    Tc = novel_tc(G, T_F)
    epsilon0 = 2.0 * G * T_F
    e = eta(T / Tc)
    eps = epsilon0 * e
    if T_D is not None and eps > T_D:
        warnings.warn(f"film spectrum {eps:.4g} K exceeds the Debye energy {T_D:.4g} K",
                      ModelViolationWarning, stacklevel=2)
    return NovelSpectrum(T=T, Tc=Tc, epsilon0=epsilon0, epsilon=eps, eta=e)


@dataclass(frozen=True)
class NovelGapSolution:
    G: float
    T_F: float
    Tc: float
    epsilon0: float
    eta: Callable[[float], float]

    def epsilon(self, T):
        return self.epsilon0 * self.eta(T / self.Tc)


def solve_novel(G, T_F):
    Tc = novel_tc(G, T_F)
    if Tc <= 0:
        raise DomainError("film phase needs G > 0")
    return NovelGapSolution(G=G, T_F=T_F, Tc=Tc, epsilon0=2.0 * Tc, eta=eta)


def anomalous_average_novel(xi, T, G, T_F):
    """Pair amplitude ``<a_{-k,-} a_{k,+}>`` of the film phase.

    ``sqrt(epsilon^2 - xi^2) / (4 G T_F)`` for ``|xi| <= epsilon`` and ``T < Tc``;
    zero otherwise. ``xi`` in kelvin.
    """
    Tc = novel_tc(G, T_F)
    xi = np.asarray(xi, dtype=float)
    if not T < Tc:
        return np.zeros_like(xi)
    eps = 2.0 * Tc * eta(T / Tc)
    inside = np.abs(xi) <= eps
    return np.where(inside, np.sqrt(np.clip(eps**2 - xi**2, 0.0, None)), 0.0) / (4.0 * G * T_F)


# --------------------------------------------------------------------------
# shell mode counting
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NuCount:
    k: float
    q: float
    edges: tuple
    nu_analytic: float
    nu_lattice: int | None = None

    @property
    def ratio(self):
        return None if self.nu_lattice is None else self.nu_lattice / self.nu_analytic


def _edges(geometry):
    return tuple(float(L) for L in geometry.edges)


def nu_count_analytic(k, q, geometry):
    """Shell volume ``q L1 L2 L3 k^2 / pi^2`` in lattice units.

    For a cube with ``q = sqrt(3) pi / L`` this is ``(2 sqrt(3) / pi) k^2 L^2``;
    for a film with ``q = pi / d`` it is ``k^2 L^2 / pi``.
    """
    if not (k > 0 and q >= 0):
        raise DomainError("need k > 0 and q >= 0")
    if q / k >= 0.01:
        warnings.warn(f"shell half-width q/k = {q / k:.3g} is not small",
                      ModelViolationWarning, stacklevel=2)
    L1, L2, L3 = _edges(geometry)
    return q * L1 * L2 * L3 * k**2 / math.pi**2


def nu_count_lattice(k, q, L1, L2, L3, budget=10**8):
    """Count integer triples with ``k - q < |k'| < k + q``, ``k'_i = 2 pi n_i / L_i``.

    The longest edge is summed in closed form, the other two are enumerated,
    so the cost is the size of that two-dimensional grid.
    """
    if not (k > q >= 0):
        raise DomainError("need k > q >= 0")
    La, Lb, Lc = sorted((float(L1), float(L2), float(L3)))
    kmax = k + q
    Na = int(math.floor(kmax * La / (2 * math.pi)))
    Nb = int(math.floor(kmax * Lb / (2 * math.pi)))
    cost = (2 * Na + 1) * (2 * Nb + 1)
    if cost > budget:
        raise SizeError(f"lattice enumeration needs {cost:.3g} cells, budget is {budget:.3g}")
    c = Lc / (2 * math.pi)
    nb = np.arange(-Nb, Nb + 1)
    kb2 = (2 * math.pi * nb / Lb) ** 2
    lo2, hi2 = (k - q) ** 2, kmax**2
    total = 0
    for na in range(-Na, Na + 1):
        s = (2 * math.pi * na / La) ** 2 + kb2
        B = hi2 - s
        A = lo2 - s
        ok = B > 0
        hi = np.sqrt(np.where(ok, B, 0.0)) * c
        inner = 2 * (np.ceil(hi) - 1) + 1
        lo = np.sqrt(np.where(A > 0, A, 0.0)) * c
        excluded = np.where(A >= 0, 2 * np.floor(lo) + 1, 0)
        total += int(np.sum(np.where(ok, inner - excluded, 0)))
    return total


def nu_count(k, q, geometry, budget=10**8):
    """Analytic and lattice counts side by side."""
    edges = _edges(geometry)
    return NuCount(k=k, q=q, edges=edges,
                   nu_analytic=nu_count_analytic(k, q, geometry),
                   nu_lattice=nu_count_lattice(k, q, *edges, budget=budget))


# --------------------------------------------------------------------------
# bulk collapse versus film persistence
# --------------------------------------------------------------------------

def pairing_prefactor(g, k, geometry):
    """Energy ``g nu(k) / 2V`` multiplying ``tanh(E / 2T) / E`` in the shell gap equation.

    SI units: ``g`` in J m^3, ``k`` in 1/m, result in joules. Cube:
    ``sqrt(3) g k^2 / (pi L)``; film: ``g k^2 / (2 pi d)``, independent of ``L``.
    """
    if isinstance(geometry, IsotropicBulk):
        return math.sqrt(3.0) * g * k**2 / (math.pi * geometry.L)
    if isinstance(geometry, Film):
        return g * k**2 / (2.0 * math.pi * geometry.d)
    raise TypeError("pairing_prefactor handles IsotropicBulk and Film")


def shell_gap_root(prefactor, T):
    """Largest ``E > 0`` with ``E = prefactor * tanh(E / 2 k_B T)``, or 0 if none.

    ``prefactor`` in joules, ``T`` in kelvin.
    """
    if prefactor <= 0:
        return 0.0
    if T <= 0:
        return prefactor
    kT = K_B * T
    if prefactor / (2.0 * kT) <= 1.0:
        return 0.0
    return optimize.brentq(lambda E: E - prefactor * math.tanh(E / (2 * kT)),
                           1e-15 * prefactor, prefactor, xtol=1e-16 * prefactor, rtol=1e-14)


@dataclass(frozen=True)
class CollapseVerdict:
    L: np.ndarray
    prefactor: np.ndarray
    root: np.ndarray
    threshold_L: float
    collapses: bool


def _scan(g, k, T, geometries):
    pref = np.array([pairing_prefactor(g, k, geo) for geo in geometries])
    roots = np.array([shell_gap_root(p, T) for p in pref])
    return pref, roots


def bulk_gap_collapse_check(g, k, T, L_values):
    """Scan cubes of growing edge for a surviving shell gap.

    ``threshold_L`` is the first scanned edge beyond which no positive root
    remains (infinite at ``T = 0``, where the root equals the prefactor and
    still vanishes as ``1/L``).
    """
    Ls = np.sort(np.asarray(L_values, dtype=float))
    pref, roots = _scan(g, k, T, [IsotropicBulk(L) for L in Ls])
    dead = np.nonzero(roots == 0)[0]
    threshold = float(Ls[dead[0]]) if dead.size and np.all(roots[dead[0]:] == 0) else math.inf
    decaying = bool(np.all(np.diff(pref) < 0))
    collapses = decaying and (math.isfinite(threshold) or T <= 0)
    return CollapseVerdict(L=Ls, prefactor=pref, root=roots, threshold_L=threshold, collapses=collapses)


def film_gap_persistence_check(g, k, T, d, L_values):
    """The same scan for a film of thickness ``d``; the root does not depend on ``L``."""
    Ls = np.sort(np.asarray(L_values, dtype=float))
    pref, roots = _scan(g, k, T, [Film(d, L) for L in Ls])
    alive = bool(np.all(roots > 0))
    return CollapseVerdict(L=Ls, prefactor=pref, root=roots,
                           threshold_L=math.inf if alive else float(Ls[np.argmin(roots > 0)]),
                           collapses=not alive)


def bulk_threshold_L(g, k, T):
    """Edge above which a cube at ``T > 0`` has only the trivial shell root."""
    if T <= 0:
        return math.inf
    return math.sqrt(3.0) * g * k**2 / (2.0 * math.pi * K_B * T)
