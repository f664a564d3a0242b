"""Material parameters and the dimensionless groups derived from them.

All SI bookkeeping lives here. Every solver downstream works with the
reduced groups (``gN0``, ``G``, temperatures in kelvin) collected in
:class:`ReducedParams`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import constants

from .errors import DomainError

HBAR = constants.hbar
M_E = constants.m_e
K_B = constants.k
EV = constants.e

EULER_GAMMA = 0.5772156649015329
EXP_GAMMA = math.exp(EULER_GAMMA)  # 1.7810724179901979
ZETA3 = 1.2020569031595942
BCS_TC_PREFACTOR = 2.0 * EXP_GAMMA / math.pi  # the familiar 1.13


@dataclass(frozen=True)
class Box:
    """Rectangular box with edges ``L1, L2, L3`` (metres)."""

    L1: float
    L2: float
    L3: float

    def __post_init__(self):
        for name in ("L1", "L2", "L3"):
            if not getattr(self, name) > 0:
                raise DomainError(f"Box.{name} must be positive")

    @property
    def edges(self):
        return (self.L1, self.L2, self.L3)


@dataclass(frozen=True)
class Film:
    """Thin film of thickness ``d`` (metres) and lateral edge ``L``.

    ``L`` defaults to infinity; only mode counting needs a finite value.
    """

    d: float
    L: float = math.inf

    def __post_init__(self):
        if not (self.d > 0 and self.L > 0):
            raise DomainError("Film.d and Film.L must be positive")

    @property
    def edges(self):
        return (self.L, self.L, self.d)


@dataclass(frozen=True)
class IsotropicBulk:
    """Cube of edge ``L`` (metres); ``L = math.inf`` is the thermodynamic limit."""

    L: float

    def __post_init__(self):
        if not (self.L > 0):
            raise DomainError("IsotropicBulk.L must be positive")

    @property
    def edges(self):
        return (self.L, self.L, self.L)


Geometry = Box | Film | IsotropicBulk


@dataclass(frozen=True)
class MaterialParams:
    """Physical inputs in SI units.

    Parameters
    ----------
    g : float
        Pairing coupling constant, J m^3.
    m : float
        Electron mass, kg.
    epsilon_F : float
        Fermi energy, J. The chemical potential is identified with it.
    omega_D : float
        Debye angular frequency, rad/s.
    geometry : Box, Film or IsotropicBulk
    """

    g: float
    m: float
    epsilon_F: float
    omega_D: float
    geometry: Geometry

    def __post_init__(self):
        for name in ("g", "m", "epsilon_F", "omega_D"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not HBAR * self.omega_D < self.epsilon_F:
            raise DomainError("weak-coupling window requires hbar*omega_D < epsilon_F")

    @property
    def k_F(self):
        return math.sqrt(2.0 * self.m * self.epsilon_F) / HBAR


@dataclass(frozen=True)
class ReducedParams:
    """Dimensionless groups that drive the solvers.

    Temperatures are in kelvin, ``epsilon1`` in joules, ``q`` and ``k_F``
    in 1/m and ``N0`` in 1/(J m^3).
    """

    gN0: float
    T_D: float
    T_F: float
    epsilon1: float
    G: float
    q: float
    k_F: float
    N0: float
    geometry: Geometry

    @property
    def Tc_standard(self):
        """Closed-form BCS critical temperature, K."""
        return BCS_TC_PREFACTOR * self.T_D * math.exp(-1.0 / self.gN0)

    @property
    def Tc_novel(self):
        """Critical temperature of the film phase, K."""
        return self.G * self.T_F


def _positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value!r}")


def density_of_states(m, k_F):
    """Free-electron density of states per spin and volume at the Fermi level.

    Returns ``m k_F / (2 pi^2 hbar^2)`` in 1/(J m^3).
    """
    _positive(m=m, k_F=k_F)
    return m * k_F / (2.0 * math.pi**2 * HBAR**2)


def confinement(geometry, m=M_E):
    """Minimal confinement wave number and energy for a geometry.

    Returns
    -------
    q : float
        Wave number of the lowest standing wave, 1/m. Zero for an infinite
        isotropic bulk.
    epsilon1 : float
        ``hbar^2 q^2 / 2m`` in joules.
    """
    _positive(m=m)
    if isinstance(geometry, Box):
        q = math.pi * math.sqrt(sum(1.0 / L**2 for L in geometry.edges))
    elif isinstance(geometry, Film):
        q = math.pi / geometry.d
    elif isinstance(geometry, IsotropicBulk):
        q = 0.0 if math.isinf(geometry.L) else math.sqrt(3.0) * math.pi / geometry.L
    else:
        raise TypeError(f"unknown geometry {geometry!r}")
    return q, HBAR**2 * q**2 / (2.0 * m)


def effective_coupling(g, m, epsilon1):
    """Dimensionless film coupling ``(g/4pi^2)(2m/hbar^2)^(3/2) sqrt(epsilon1)``.

    ``g = 0`` or ``epsilon1 = 0`` give ``G = 0``; negative inputs raise.
    """
    if g < 0 or m <= 0 or epsilon1 < 0:
        raise DomainError("effective_coupling needs g >= 0, m > 0, epsilon1 >= 0")
    return g / (4.0 * math.pi**2) * (2.0 * m / HBAR**2) ** 1.5 * math.sqrt(epsilon1)


def coupling_for_G(G, m, epsilon1):
    """Invert :func:`effective_coupling` for ``g``."""
    _positive(G=G, m=m, epsilon1=epsilon1)
    return G * 4.0 * math.pi**2 / ((2.0 * m / HBAR**2) ** 1.5 * math.sqrt(epsilon1))


def reduce(params: MaterialParams) -> ReducedParams:
    k_F = params.k_F
    N0 = density_of_states(params.m, k_F)
    q, epsilon1 = confinement(params.geometry, params.m)
    return ReducedParams(
        gN0=params.g * N0,
        T_D=HBAR * params.omega_D / K_B,
        T_F=params.epsilon_F / K_B,
        epsilon1=epsilon1,
        G=effective_coupling(params.g, params.m, epsilon1),
        q=q,
        k_F=k_F,
        N0=N0,
        geometry=params.geometry,
    )


def restore(reduced: ReducedParams) -> MaterialParams:
    """Rebuild the SI inputs from a :class:`ReducedParams`; inverse of :func:`reduce`."""
    m = 2.0 * math.pi**2 * HBAR**2 * reduced.N0 / reduced.k_F
    return MaterialParams(
        g=reduced.gN0 / reduced.N0,
        m=m,
        epsilon_F=K_B * reduced.T_F,
        omega_D=K_B * reduced.T_D / HBAR,
        geometry=reduced.geometry,
    )


def film_material(gN0, epsilon_F_eV, T_D, thickness_nm, mass_ratio=1.0):
    """Convenience constructor: a film specified by ``gN0`` instead of ``g``."""
    m = mass_ratio * M_E
    epsilon_F = epsilon_F_eV * EV
    k_F = math.sqrt(2.0 * m * epsilon_F) / HBAR
    g = gN0 / density_of_states(m, k_F)
    return MaterialParams(g=g, m=m, epsilon_F=epsilon_F, omega_D=K_B * T_D / HBAR,
                          geometry=Film(thickness_nm * 1e-9))
