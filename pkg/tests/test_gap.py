import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from bcsreps import DomainError, ModelViolationWarning, SizeError
from bcsreps import gap
from bcsreps.material import BCS_TC_PREFACTOR, K_B, Film, IsotropicBulk


def bisect_eta(tau, n=200):
    """Independent oracle: plain bisection on x - tanh(x / tau)."""
    lo, hi = 1e-300, 1.0
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        if mid - math.tanh(mid / tau) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------- standard

@pytest.mark.parametrize("t", [1e-4, 0.01, 0.05, 0.2])
def test_linearized_integral_against_quadrature(t):
    expected, _ = integrate.quad(lambda x: math.tanh(x / (2 * t)) / x, 0, 1, limit=500, epsrel=1e-12)
    assert gap.linearized_gap_integral(t) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("gN0", [0.1, 0.2, 0.3])
def test_zero_temperature_gap_solves_gap_equation(gN0):
    d = gap.bcs_gap_at(0.0, gN0)
    val, _ = integrate.quad(lambda x: 1 / math.hypot(x, d), 0, 1, epsrel=1e-13)
    assert gN0 * val == pytest.approx(1.0, rel=1e-11)


@pytest.mark.parametrize("gN0,frac", [(0.2, 0.3), (0.2, 0.9), (0.3, 0.6)])
def test_finite_temperature_gap_solves_gap_equation(gN0, frac):
    T = frac * gap.bcs_tc(gN0).numeric
    d = gap.bcs_gap_at(T, gN0)
    val, _ = integrate.quad(lambda x: math.tanh(math.hypot(x, d) / (2 * T)) / math.hypot(x, d),
                            0, 1, epsrel=1e-12, limit=200)
    assert d > 0
    assert gN0 * val == pytest.approx(1.0, rel=1e-9)


def test_gap_vanishes_above_tc():
    tc = gap.bcs_tc(0.2).numeric
    assert gap.bcs_gap_at(1.01 * tc, 0.2) == 0.0


@pytest.mark.parametrize("gN0", [0.1, 0.2, 0.3, 0.5])
def test_tc_numeric_matches_closed_form(gN0):
    tc = gap.bcs_tc(gN0)
    assert tc.closed_form == pytest.approx(BCS_TC_PREFACTOR * math.exp(-1 / gN0), rel=1e-15)
    assert tc.numeric / tc.closed_form == pytest.approx(1.0, abs=5e-3)


def test_tc_scales_with_debye_temperature():
    assert gap.bcs_tc(0.25, 300.0).numeric == pytest.approx(300 * gap.bcs_tc(0.25).numeric, rel=1e-12)


def test_gap_to_tc_ratio():
    gN0 = 0.2
    ratio = 2 * gap.bcs_gap_at(0.0, gN0) / gap.bcs_tc(gN0).numeric
    assert ratio == pytest.approx(2 * math.pi / math.exp(0.5772156649015329), rel=1e-3)


def test_solve_standard_is_monotone():
    sol = gap.solve_standard(0.25, n_points=41)
    assert sol.Delta[0] > 0 and sol.Delta[-1] == pytest.approx(0.0, abs=1e-6)
    assert np.all(np.diff(sol.Delta) <= 1e-15)


@pytest.mark.parametrize("gN0", [0.0, -0.1, 1.5])
def test_gap_rejects_bad_coupling(gN0):
    with pytest.raises(DomainError):
        gap.bcs_gap_at(0.0, gN0)


# ---------------------------------------------------------------- film phase

@pytest.mark.parametrize("tau", [0.05, 0.3, 0.5, 0.8, 0.95, 0.999])
def test_eta_against_bisection(tau):
    assert gap.eta(tau) == pytest.approx(bisect_eta(tau), abs=1e-14)


def test_eta_endpoints():
    assert gap.eta(0.0) == 1.0
    assert gap.eta(1.0) == 0.0
    assert gap.eta(2.5) == 0.0
    with pytest.raises(DomainError):
        gap.eta(-0.1)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 0.999))
def test_eta_is_a_fixed_point(tau):
    e = gap.eta(tau)
    assert 0 < e <= 1
    assert abs(e - math.tanh(e / tau)) < 1e-14


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 0.998), st.floats(1e-4, 1e-3))
def test_eta_decreasing(tau, step):
    # below tau ~ 0.05 eta rounds to exactly 1
    if tau < 0.1:
        assert gap.eta(tau + step) <= gap.eta(tau)
    else:
        assert gap.eta(tau + step) < gap.eta(tau)


def test_eta_low_temperature_limit():
    tau = np.linspace(0.005, 0.1, 50)
    dev = np.abs(gap.eta_curve(tau) - (1 - 2 * np.exp(-2 / tau)))
    assert dev.max() <= 1e-6


def test_eta_near_tc_limit():
    for tau in (0.99, 0.995, 0.999):
        assert gap.eta(tau) / math.sqrt(3 * (1 - tau)) == pytest.approx(1.0, abs=0.02)


def test_universal_ratio():
    spec = gap.epsilon_of_T(0.0, 0.01, 1e4)
    assert spec.epsilon0 / spec.Tc == pytest.approx(2.0, abs=1e-10)


def test_epsilon_of_T_scales_with_eta():
    spec = gap.epsilon_of_T(50.0, 0.01, 1e4)
    assert spec.epsilon == pytest.approx(200.0 * bisect_eta(0.5), rel=1e-13)


def test_spectrum_shape():
    spec = gap.epsilon_of_T(20.0, 0.01, 1e4)
    xi = np.array([-spec.epsilon * 2, -spec.epsilon / 2, 0.0, spec.epsilon * 3])
    assert np.allclose(spec.energy(xi), [xi[0], spec.epsilon, spec.epsilon, xi[3]])
    assert spec.gap(np.array([0.0]))[0] == pytest.approx(spec.epsilon)
    assert spec.gap(np.array([2 * spec.epsilon]))[0] == 0.0


def test_model_violation_warning():
    with pytest.warns(ModelViolationWarning):
        gap.epsilon_of_T(0.0, 0.01, 1e4, T_D=150.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gap.epsilon_of_T(0.0, 0.01, 1e4, T_D=500.0)


@pytest.mark.parametrize("T", [5.0, 40.0, 90.0])
def test_anomalous_average_is_self_consistent(T):
    # <aa> = Delta_k / (2E) tanh(E / 2T) with E = epsilon for |xi| <= epsilon
    G, T_F = 0.01, 1e4
    spec = gap.epsilon_of_T(T, G, T_F)
    xi = np.linspace(-1.5 * spec.epsilon, 1.5 * spec.epsilon, 31)
    direct = spec.gap(xi) / (2 * spec.epsilon) * math.tanh(spec.epsilon / (2 * T))
    assert np.allclose(gap.anomalous_average_novel(xi, T, G, T_F), direct, rtol=1e-12, atol=1e-15)


def test_anomalous_average_zero_above_tc():
    assert np.all(gap.anomalous_average_novel(np.linspace(-5, 5, 3), 150.0, 0.01, 1e4) == 0)


# ---------------------------------------------------------------- mode counting

def test_cube_shell_count_matches_analytic():
    k = 1.0
    L = 200 * 2 * math.pi / k
    q = 0.005 * k
    res = gap.nu_count(k, q, IsotropicBulk(L))
    assert res.nu_lattice >= 10**4
    assert res.ratio == pytest.approx(1.0, abs=0.05)


def test_small_shell_brute_force():
    # direct triple loop on a small lattice
    k, q, L = (1.0, 0.05, (40.0, 47.0, 53.0))
    n_max = [int(math.ceil((k + q) * Li / (2 * math.pi))) for Li in L]
    count = 0
    for n in itertools.product(*(range(-m, m + 1) for m in n_max)):
        r = math.sqrt(sum((2 * math.pi * ni / Li) ** 2 for ni, Li in zip(n, L)))
        count += k - q < r < k + q
    assert gap.nu_count_lattice(k, q, *L) == count


@settings(max_examples=20, deadline=None)
@given(st.permutations([300.0, 410.0, 523.0]), st.floats(0.002, 0.02))
def test_lattice_count_permutation_invariant(edges, q):
    assert gap.nu_count_lattice(1.0, q, *edges) == gap.nu_count_lattice(1.0, q, 300.0, 410.0, 523.0)


def test_lattice_budget():
    with pytest.raises(SizeError):
        gap.nu_count_lattice(1.0, 0.01, 1e5, 1e5, 1e5, budget=10**6)


def test_shell_width_warning():
    with pytest.warns(ModelViolationWarning):
        gap.nu_count_analytic(1.0, 0.05, IsotropicBulk(100.0))


def test_film_count_closed_form():
    d, L, k = 1e-9, 1e-6, 1e12
    q = math.pi / d
    assert gap.nu_count_analytic(k, q, Film(d, L)) == pytest.approx(k**2 * L**2 / math.pi, rel=1e-14)


# ---------------------------------------------------------------- collapse

def test_bulk_gap_collapses_at_threshold():
    g, k, T = 1e-48, 1e10, 10.0
    L_star = gap.bulk_threshold_L(g, k, T)
    verdict = gap.bulk_gap_collapse_check(g, k, T, L_star * np.array([0.25, 0.5, 0.9, 1.1, 2.0, 10.0]))
    assert verdict.collapses
    assert np.all(verdict.root[:3] > 0) and np.all(verdict.root[3:] == 0)
    assert verdict.threshold_L == pytest.approx(1.1 * L_star)


def test_shell_root_solves_equation():
    pref, T = 50 * K_B, 10.0
    E = gap.shell_gap_root(pref, T)
    assert E == pytest.approx(pref * math.tanh(E / (2 * K_B * T)), rel=1e-13)


def test_film_gap_independent_of_area():
    v = gap.film_gap_persistence_check(1e-48, 1e10, 10.0, 1e-9, [1e-6, 1e-3, 1.0, 1e3])
    assert not v.collapses
    assert np.ptp(v.root) == 0.0 and v.root[0] > 0
