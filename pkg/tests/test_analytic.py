import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hulthen.analytic import (
    Branch,
    match_at_origin,
    phi_left,
    phi_right,
    solve_matching,
    transmission,
    wave_parameters,
)
from hulthen.errors import ParameterError
from hulthen.oracle import integrate_and_extract
from hulthen.potential import HulthenParams, evaluate


def mp_transmission(energy, pot, dps=40):
    """Same matching, but every hypergeometric value from mpmath."""
    with mpmath.workdps(dps):
        E, v0, a, q = (mpmath.mpf(v) for v in (energy, pot.v0, pot.a, pot.q))
        k = mpmath.sqrt(E * E - 1)
        mu = 1j * k / a
        lam = 0.5 + 0.5 * mpmath.sqrt(mpmath.mpc(1 - (2 * v0 / (a * q)) ** 2))
        nu = mpmath.sqrt(mu**2 + lam**2 - lam - 2 * E * v0 / (a * a * q))

        def basis(y, s):
            f = lambda t: t ** (s * mu) * (1 - t) ** lam * mpmath.hyp2f1(
                s * mu - nu + lam, s * mu + nu + lam, 1 + 2 * s * mu, t
            )
            return f(y), mpmath.diff(f, y)

        u1, du1 = basis(q, 1)
        u2, du2 = basis(q, -1)
        w, dw = u2, -du2  # right solution seen from the left: d/dx flips sign
        # left: a y d/dy, right: -a z d/dz; the common factor a q cancels
        det = u1 * du2 - u2 * du1
        A = (w * du2 - u2 * dw) / det
        return float(1 / abs(A) ** 2)


def test_reference_parameters_at_e2(tall_narrow):
    wp = wave_parameters(2.0, tall_narrow)
    assert wp.k == pytest.approx(math.sqrt(3), rel=1e-15)
    assert wp.mu == pytest.approx(1j * math.sqrt(3), rel=1e-15)
    assert wp.lam.real == pytest.approx(0.5, abs=1e-15)
    assert wp.lam.imag == pytest.approx(4.4162, abs=5e-5)
    lam_exact = 0.5 + 0.5j * math.sqrt((2 * 4 / 0.9) ** 2 - 1)
    assert abs(wp.lam - lam_exact) < 1e-14
    nu_sq = wp.mu**2 + wp.lam**2 - wp.lam - 2 * 2 * 4 / 0.9
    assert abs(wp.nu**2 - nu_sq) < 1e-12


def test_minus_branch_lambda_is_complement(tall_narrow):
    plus = wave_parameters(2.0, tall_narrow, Branch.PLUS)
    minus = wave_parameters(2.0, tall_narrow, Branch.MINUS)
    assert abs(plus.lam + minus.lam - 1) < 1e-15


def test_real_lambda_for_weak_barrier():
    wp = wave_parameters(3.0, HulthenParams(0.2, 1.0, 0.5))
    assert wp.lam.imag == 0 and 0.5 < wp.lam.real < 1


def test_matches_mpmath_matching(tall_narrow, low_wide):
    for pot in (tall_narrow, low_wide):
        for energy in (1.3, 2.0, 4.5):
            assert transmission(energy, pot)[1] == pytest.approx(mp_transmission(energy, pot), rel=1e-9)


@pytest.mark.parametrize("energy", [1.2, 2.0, 3.7, 7.5])
def test_against_ode_oracle(tall_narrow, low_narrow, energy):
    for pot in (tall_narrow, low_narrow):
        ana = match_at_origin(energy, pot)
        ode = integrate_and_extract(energy, pot)
        assert abs(ana.trans - ode.trans) <= 1e-7
        assert abs(ana.refl - ode.refl) <= 1e-7


def test_wavefunction_continuous_at_origin(tall_narrow):
    wp = wave_parameters(2.0, tall_narrow)
    sol = solve_matching(wp)
    left, dleft = phi_left(tall_narrow.q, sol.ampA, sol.ampB, wp)
    right, dright = phi_right(tall_narrow.q, sol.ampD, wp)
    assert abs(left - right) <= 1e-12 * abs(right)
    # both return d/dx, so the slopes must agree directly
    assert abs(dleft - dright) <= 1e-12 * abs(dright)


def test_right_solution_is_outgoing_plane_wave(tall_narrow):
    wp = wave_parameters(2.0, tall_narrow)
    for x in (25.0, 30.0):
        z = tall_narrow.q * math.exp(-tall_narrow.a * x)
        value, _ = phi_right(z, 1.0, wp)
        expected = cmath.exp(1j * wp.k * x) * tall_narrow.q ** (-wp.mu)
        assert abs(value - expected) < 1e-9


def test_wavefunction_solves_klein_gordon(tall_narrow):
    """Central second difference of phi_L against -[(E - V)^2 - 1] phi."""
    energy = 2.0
    wp = wave_parameters(energy, tall_narrow)
    sol = solve_matching(wp)
    a, q = tall_narrow.a, tall_narrow.q

    def phi(x):
        if x < 0:
            return phi_left(q * math.exp(a * x), sol.ampA, sol.ampB, wp)[0]
        return phi_right(q * math.exp(-a * x), sol.ampD, wp)[0]

    h = 1e-4
    for x in (-3.0, -0.8, -0.2, 0.4, 2.5):
        second = (phi(x + h) - 2 * phi(x) + phi(x - h)) / h**2
        rhs = -((energy - evaluate(tall_narrow, x)) ** 2 - 1) * phi(x)
        assert abs(second - rhs) <= 1e-5 * max(1.0, abs(rhs))


def test_branch_invariance(tall_narrow, low_wide):
    for pot in (tall_narrow, low_wide):
        for energy in np.linspace(1.05, 10, 25):
            assert abs(transmission(energy, pot, Branch.PLUS)[1] - transmission(energy, pot, Branch.MINUS)[1]) <= 1e-10


@pytest.mark.parametrize("energy", [1.1, 2.0, 5.0, 30.0])
def test_free_particle_limit(energy):
    sol = match_at_origin(energy, HulthenParams(1e-12, 1.0, 0.9))
    assert sol.trans == pytest.approx(1.0, abs=1e-8)
    assert abs(sol.ampA) == pytest.approx(1.0, abs=1e-8)
    assert abs(sol.ampB) < 1e-6


def test_threshold_suppression(tall_narrow):
    assert transmission(1.0001, tall_narrow)[1] < 0.01
    assert transmission(1.0001, tall_narrow)[1] < transmission(1.01, tall_narrow)[1] < transmission(1.1, tall_narrow)[1]


def test_high_energy_transparency(tall_narrow):
    # far above the 40-unit peak the barrier is nearly transparent
    assert transmission(400.0, tall_narrow)[1] > 0.99


@pytest.mark.parametrize("energy", [1.0, 0.5, -0.999, float("nan")])
def test_below_threshold_rejected(tall_narrow, energy):
    with pytest.raises(ParameterError):
        wave_parameters(energy, tall_narrow)
    with pytest.raises(ParameterError):
        transmission(energy, tall_narrow)


def test_phi_domain_enforced(tall_narrow):
    wp = wave_parameters(2.0, tall_narrow)
    with pytest.raises(ParameterError):
        phi_left(0.95, 1.0, 0.0, wp)
    with pytest.raises(ParameterError):
        phi_right(0.0, 1.0, wp)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(1.05, 10.0),
    st.floats(0.05, 8.0),
    st.sampled_from([0.5, 1.0, 2.0]),
    st.floats(0.05, 0.95),
)
def test_unitarity_property(energy, v0, a, q):
    refl, trans = transmission(energy, HulthenParams(v0, a, q))
    assert 0 <= trans <= 1 + 1e-8
    assert abs(refl + trans - 1) <= 1e-8


@settings(max_examples=25, deadline=None)
@given(st.floats(1.05, 8.0), st.floats(0.05, 8.0), st.floats(0.05, 0.95))
def test_branch_property(energy, v0, q):
    pot = HulthenParams(v0, 1.0, q)
    assert abs(transmission(energy, pot, Branch.PLUS)[1] - transmission(energy, pot, Branch.MINUS)[1]) <= 1e-10
