import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from bcsreps import ConsistencyError, DomainError
from bcsreps import gap, thermo
from bcsreps.material import EV, EXP_GAMMA, HBAR, M_E, density_of_states

ZETA3 = float(special.zeta(3))


def phi_direct(e):
    """Oracle: the original x-integral, log-singular only at x = 1."""
    val, _ = integrate.quad(lambda x: math.log((1 + x) / (1 - x)) ** 3, 0, e, epsrel=1e-12, limit=200)
    return val


# ---------------------------------------------------------------- phi

@pytest.mark.parametrize("e", [0.1, 0.5, 0.9, 0.99])
def test_phi_against_direct_integral(e):
    assert thermo.phi(e) == pytest.approx(phi_direct(e), rel=1e-9)


def test_phi_at_one():
    assert thermo.phi(1.0) == pytest.approx(9 * ZETA3, abs=1e-10)


def test_phi_domain():
    assert thermo.phi(0.0) == 0.0
    with pytest.raises(DomainError):
        thermo.phi(1.2)


# ---------------------------------------------------------------- critical fields

def test_field_endpoints():
    assert thermo.hc_ratio_novel(0.0) == pytest.approx(1.0, abs=1e-14)
    assert thermo.hc_ratio_novel(1.0) == 0.0
    assert thermo.hc_ratio_novel(1.5) == 0.0


def test_field_near_tc():
    assert thermo.hc_ratio_novel(0.999) / (3 * 0.001**1.5) == pytest.approx(1.0, abs=0.03)


def test_field_low_temperature_expansion():
    # eta = 1 up to 2e-9 at tau = 0.1, so R_H = sqrt(1 - tau^3 * 9 zeta3 / 2)
    tau = 0.1
    assert thermo.hc_ratio_novel(tau) == pytest.approx(1 - (9 * ZETA3 / 4) * tau**3, abs=1e-4)


def test_radicand_non_negative_on_grid():
    tau = np.arange(0.0, 1.0 + 1e-12, 1e-3)
    e = gap.eta_curve(tau)
    raw = np.array([ei**4 - 0.5 * t**3 * (thermo.phi(ei) if ei < 1 else 9 * ZETA3) for t, ei in zip(tau, e)])
    assert raw.min() >= -1e-12
    assert np.all(np.array([thermo.condensation_shape(t) for t in tau]) >= 0)


def test_field_strictly_decreasing():
    tau = np.linspace(0.05, 1.0, 200)
    R = np.array([thermo.hc_ratio_novel(t) for t in tau])
    assert np.all(np.diff(R) < 0)


def test_free_energy_gain_is_field_squared():
    p = thermo.CompetitionParams(100.0, 20.0, 0.1)
    for T in (0.0, 10.0, 55.0, 99.0):
        R = thermo.hc_ratio_novel(T / 100.0)
        assert -thermo.df_novel(T, p) == pytest.approx((R * p.field_ratio) ** 2, rel=1e-12, abs=1e-300)


def test_zero_temperature_field_forms():
    eF = 5 * EV
    k_F = math.sqrt(2 * M_E * eF) / HBAR
    N0 = density_of_states(M_E, k_F)
    gN0, Tc, Tcp = 0.1, 100.0, 20.0
    h0 = thermo.hc0_novel(gN0 / N0, eF, M_E, N0, Tc)
    h0p = thermo.hc0_standard(N0, Tcp)
    assert h0 / h0p == pytest.approx(EXP_GAMMA * (Tc / Tcp) * math.sqrt(gN0 / 6), rel=1e-12)
    assert h0 / h0p == pytest.approx(1.1497, abs=1e-4)


def test_field_forms_disagree_for_inconsistent_dos():
    eF = 5 * EV
    N0 = density_of_states(M_E, math.sqrt(2 * M_E * eF) / HBAR)
    with pytest.raises(ConsistencyError):
        thermo.hc0_novel(1e-48, eF, M_E, 2 * N0, 100.0)


def test_two_fluid_field():
    assert thermo.hc_standard(0.5) == 0.75
    assert thermo.hc_standard(1.2) == 0.0
    with pytest.raises(ValueError):
        thermo.hc_standard(0.5, mode="nope")


def test_coupling_integral_field_low_temperature():
    assert thermo.hc_standard(0.05, "coupling_integral") == pytest.approx(1.0, abs=5e-3)


@pytest.mark.parametrize("tp", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_coupling_integral_field_near_two_fluid(tp):
    assert abs(thermo.hc_standard(tp, "coupling_integral") - (1 - tp**2)) <= 0.05


def test_coupling_integral_zero_temperature_norm():
    # Delta(u, 0) = 1 / sinh(u)
    lam = 0.2
    val, _ = integrate.quad(lambda u: gap.bcs_gap_at(0.0, 1 / u) ** 2, 1 / lam, 60)
    assert val == pytest.approx(1 / math.tanh(1 / lam) - 1, rel=1e-8)


# ---------------------------------------------------------------- specific heat

def second_derivative(f, x, h=1e-3):
    return (f(x + h) - 2 * f(x) + f(x - h)) / h**2


@pytest.mark.parametrize("tau", [0.2, 0.4, 0.6, 0.8, 0.95])
def test_heat_is_curvature_of_free_energy(tau):
    # R_C = h''(tau) / 6 with h the reduced condensation energy
    expected = second_derivative(thermo.condensation_shape, tau) / 6
    assert thermo.specific_heat_ratio_novel(tau, 0.2).R_C == pytest.approx(expected, rel=1e-4, abs=1e-6)


def test_heat_near_tc():
    R = thermo.specific_heat_ratio_novel(0.999, 0.2).R_C
    assert R / (9 * 0.001) == pytest.approx(1.0, abs=0.05)


def test_heat_low_temperature():
    R = thermo.specific_heat_ratio_novel(0.05, 0.2).R_C
    assert R == pytest.approx(-(9 * ZETA3 / 2) * 0.05, rel=0.02)


def test_heat_raw_scaling():
    a = thermo.specific_heat_ratio_novel(0.6, 0.1)
    b = thermo.specific_heat_ratio_novel(0.6, 0.3)
    assert a.R_C == b.R_C
    assert b.raw == pytest.approx(3 * a.raw, rel=1e-14)


def test_switchover_is_continuous():
    lo = thermo.specific_heat_ratio_novel(1 - 1.0001e-6, 0.2).R_C
    hi = thermo.specific_heat_ratio_novel(1 - 0.9999e-6, 0.2).R_C
    assert abs(lo - hi) < 1e-8


def test_third_order_transition():
    sig = thermo.novel_transition_signature(0.2)
    assert abs(sig.jump) <= 1e-9
    assert sig.left_slope == pytest.approx(-9.0, rel=0.05)
    assert sig.order == 3
    assert thermo.standard_transition_signature().order == 2


def test_standard_heat_branches():
    assert thermo.specific_heat_standard(0.999) == pytest.approx(12 / (7 * ZETA3), rel=1e-14)
    assert thermo.specific_heat_standard(0.999) == pytest.approx(1.4262, abs=1e-4)
    assert abs(thermo.specific_heat_standard(0.05) + 1) <= math.exp(-1 / 0.05)
    assert thermo.specific_heat_standard(1.0) == 0.0


@pytest.mark.parametrize("tau", [0.05, 0.3, 0.7, 0.95])
def test_entropy_sum_rule(tau):
    assert thermo.entropy_sum_rule(tau).residual <= 1e-3


def test_total_entropy_balance():
    # the heat anomaly integrates to zero over [0, Tc]
    val, _ = integrate.quad(lambda s: thermo.specific_heat_ratio_novel(s, 0.2).R_C, 1e-9, 1.0, limit=200)
    assert abs(val) < 1e-8


# ---------------------------------------------------------------- free energies

HOT_FILM = thermo.CompetitionParams(100.0, 20.0, 0.1)


def test_hot_film_zero_temperature():
    c = thermo.free_energy_curves([0.0], 100.0, 20.0, 0.1)
    ratio2 = math.exp(2 * 0.5772156649015329) * 25 * 0.1 / 6
    assert c.df_novel[0] == pytest.approx(-ratio2, rel=1e-12)
    assert c.df_novel[0] == pytest.approx(-1.3218, abs=1e-3)
    assert c.df_standard[0] == -1.0


def test_free_energies_vanish_at_own_tc():
    assert thermo.df_standard(20.0, HOT_FILM) == 0.0
    assert thermo.df_novel(20.0, HOT_FILM) < 0
    assert thermo.df_novel(100.0, HOT_FILM) == 0.0


def test_novel_lower_on_hot_film_grid():
    T = np.linspace(0.0, 100.0, 201)[:-1]
    c = thermo.free_energy_curves(T, 100.0, 20.0, 0.1)
    assert np.all(c.df_novel < c.df_standard)


def test_phase_select_cases():
    assert thermo.phase_select(30.0, HOT_FILM).winner is thermo.Phase.NOVEL
    assert thermo.phase_select(150.0, HOT_FILM).winner is thermo.Phase.NORMAL
    weak = thermo.CompetitionParams(10.0, 20.0, 0.1)
    assert thermo.phase_select(0.0, weak).winner is thermo.Phase.STANDARD
    assert thermo.phase_select(15.0, weak).winner is thermo.Phase.STANDARD


@settings(max_examples=100, deadline=None)
@given(Tc=st.floats(1.0, 500.0), Tcp=st.floats(1.0, 500.0), gN0=st.floats(0.01, 1.0))
def test_condition_matches_free_energy_sign(Tc, Tcp, gN0):
    p = thermo.CompetitionParams(Tc, Tcp, gN0)
    diff = thermo.df_novel(0.0, p) - thermo.df_standard(0.0, p)
    if abs(diff) < 1e-9:
        return
    assert np.sign(diff) == -(1 if p.novel_condition else -1)


def test_condition_flip_under_sweep():
    grid = np.linspace(0.1, 0.01, 2001)
    cond = np.array([thermo.CompetitionParams(100.0, 20.0, g).novel_condition for g in grid])
    sign = np.array([thermo.df_novel(0.0, thermo.CompetitionParams(100.0, 20.0, g)) < -1 for g in grid])
    assert np.array_equal(cond, sign)
    assert cond[0] and not cond[-1]


# ---------------------------------------------------------------- grand potential

@pytest.mark.parametrize("tau", [0.3, 0.5, 0.8])
def test_omega_difference_routes_agree(tau):
    G, T_F = 0.01, 1e4
    check = thermo.omega_difference_check(tau * G * T_F, G, T_F)
    assert check.residual <= 1e-4


def test_omega_integrand_negative():
    assert all(thermo.hi_average_novel_shape(s, 0.5) < 0 for s in np.linspace(0.55, 1, 10))


def test_omega_near_tc_vanishes():
    check = thermo.omega_difference_check(0.9999 * 100.0, 0.01, 1e4)
    assert check.numeric < 1e-10 and check.closed_form < 1e-10


@pytest.mark.parametrize("T,T_D", [(0.5, 1.0), (10.0, 300.0), (300.0, 300.0), (1.0, 500.0)])
def test_rep1_average_log_form(T, T_D):
    # the log form cancels catastrophically in double precision; evaluate it at 400 digits
    with mpmath.workdps(400):
        t = mpmath.tanh(mpmath.mpf(T_D) / (2 * mpmath.mpf(T)))
        expected = float(-mpmath.mpf("0.2") * (mpmath.log((1 + t) / (1 - t)) - t))
    value = thermo.hi_average_rep1(T, 0.2, T_D)
    assert value.value == pytest.approx(expected, rel=1e-13)
    assert not value.extensive


# ---------------------------------------------------------------- curves

def test_novel_curve_invariants():
    tau = np.linspace(0.0, 1.0, 51)
    c = thermo.novel_curve(tau, HOT_FILM)
    assert c.R_H[0] == pytest.approx(1.0) and c.R_H[-1] == 0.0
    assert np.all(c.delta_f <= 0) and c.delta_f[-1] == 0.0


def test_standard_curve_invariants():
    c = thermo.standard_curve(np.linspace(0.0, 1.0, 11))
    assert c.eta[0] == pytest.approx(1.0) and c.eta[-1] == pytest.approx(0.0, abs=1e-6)
    assert c.R_H[0] == 1.0 and c.R_H[-1] == 0.0
