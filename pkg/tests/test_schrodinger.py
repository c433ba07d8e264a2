import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkscatter.coin_algebra import m_map, star_fold
from walkscatter.errors import TangentTurningPoint, TruncationTooSmall
from walkscatter.potentials import Delta, Gaussian, ParabolaCap, PotentialSpec, Sech2, double_gaussian
from walkscatter.schrodinger import (
    TOL_WRONSKIAN,
    ScatteringProblem,
    SolutionBasis,
    _wkb_data,
    coins_from_potential,
    decompose,
    delta_transfer_analytic,
    eta_from_state,
    integrate_solution,
    interval_bases,
    interval_transfer_matrices,
    jost_basis,
    propagator,
    smatrix_qm,
    total_transfer,
    transfer_matrix,
    wronskian,
)
from walkscatter.walk import smatrix_stationary, stationary_state


def eckart_transmission(A, w, lam, h):
    k = math.sqrt(lam) / h
    s = 4 * A * w * w / (h * h) - 1
    c = math.cosh(0.5 * math.pi * math.sqrt(s)) ** 2 if s > 0 else math.cos(0.5 * math.pi * math.sqrt(-s)) ** 2
    sh = math.sinh(math.pi * k * w) ** 2
    return sh / (sh + c)


def test_problem_validation():
    with pytest.raises(ValueError):
        ScatteringProblem(PotentialSpec(), lam=-1.0, h=0.1)
    with pytest.raises(ValueError):
        ScatteringProblem(PotentialSpec(), lam=1.0, h=0.0)
    with pytest.raises(TruncationTooSmall):
        ScatteringProblem(PotentialSpec([Gaussian(1.0, 0.0, 1.0)]), lam=0.5, h=0.1, x_inf=1.0)


# --- decomposition ---------------------------------------------------------------


def test_decompose_free():
    assert decompose(ScatteringProblem(PotentialSpec(), lam=1.0, h=0.1)).n0 == 0


@given(st.floats(min_value=0.05, max_value=0.95))
@settings(max_examples=20)
def test_decompose_parabola_cap(lam):
    V = PotentialSpec([ParabolaCap(V0=1.0, k=1.0, half_width=2.0)])
    dec = decompose(ScatteringProblem(V, lam=lam, h=0.1, x_inf=3.0))
    r = math.sqrt(1.0 - lam)
    assert dec.n0 == 1
    assert dec.turning_points == pytest.approx((-r, r), abs=1e-12)
    for x in dec.turning_points:
        assert abs(V(x) - lam) < 1e-12 * lam


def test_decompose_double_gaussian_grid_oracle():
    V = double_gaussian()
    prob = ScatteringProblem(V, lam=0.8, h=0.05)
    dec = decompose(prob)
    assert dec.n0 == 2 and len(dec.allowed) == 3
    x = np.linspace(-prob.x_inf, prob.x_inf, 200001)
    sign = np.sign(V(x) - 0.8)
    crossings = x[:-1][np.diff(sign) != 0]
    assert np.allclose(crossings, dec.turning_points, atol=1e-4)
    for lo, hi in dec.barriers:
        assert V(0.5 * (lo + hi)) > 0.8


def test_tangent_turning_point_rejected():
    with pytest.raises(TangentTurningPoint):
        decompose(ScatteringProblem(PotentialSpec([Gaussian(1.0, 0.0, 0.5)]), lam=1.0, h=0.1))


def test_delta_is_point_barrier():
    dec = decompose(ScatteringProblem(PotentialSpec([Delta(0.3, 0.2)]), lam=1.0, h=0.5))
    assert dec.turning_points == (0.2, 0.2) and dec.point_barrier == (True,)


# --- integration ---------------------------------------------------------------------


def test_plane_wave_over_ten_wavelengths():
    # a zero-height bump forces the adaptive integrator (the free shortcut is bypassed)
    prob = ScatteringProblem(PotentialSpec([Gaussian(0.0)]), lam=1.0, h=0.1, ode_tol=1e-10)
    k = prob.k
    L = 10 * 2 * math.pi / k
    y = integrate_solution(prob, 0.0, L, [1.0, 1j * prob.h * k])
    assert abs(y[0] - np.exp(1j * k * L)) < prob.ode_tol
    assert abs(y[1] / (1j * prob.h * k) - np.exp(1j * k * L)) < prob.ode_tol


def test_integrate_rejects_empty_interval():
    prob = ScatteringProblem(PotentialSpec(), lam=1.0, h=0.1)
    with pytest.raises(ValueError):
        integrate_solution(prob, 1.0, 1.0, [1, 0])


def test_wronskian_conserved_through_delta_and_bumps():
    V = PotentialSpec([Gaussian(0.7, -1.0, 0.4), Delta(0.2, 0.3), Sech2(0.4, 1.2, 0.3)])
    prob = ScatteringProblem(V, lam=0.9, h=0.08)
    f0, g0 = np.array([1.0, 0.3j]), np.array([0.2 - 1j, 0.5])
    P = propagator(prob, -3.0, 3.0)
    w0 = wronskian(f0, g0, prob.h)
    w1 = wronskian(P @ f0, P @ g0, prob.h)
    assert abs(w1 - w0) < TOL_WRONSKIAN * abs(w0)
    back = propagator(prob, 3.0, -3.0)
    assert np.allclose(back @ P, np.eye(2), atol=1e-8)


def test_delta_jump_condition():
    prob = ScatteringProblem(PotentialSpec([Delta(0.4, 0.0)]), lam=1.0, h=0.5)
    y = integrate_solution(prob, -1e-9, 1e-9, [1.0, 0.0])
    # h phi' jumps by (g / h) phi
    assert y[1] == pytest.approx(0.4 / 0.5, abs=1e-8)


# --- bases and transfer matrices ---------------------------------------------------------


def test_bases_have_normalised_wronskian():
    prob = ScatteringProblem(double_gaussian(), lam=0.8, h=0.05)
    for b in interval_bases(prob):
        assert b.wronskian(prob.h) == pytest.approx(2j / prob.h, rel=1e-14)


def test_transfer_identity_and_translation():
    prob = ScatteringProblem(PotentialSpec(), lam=1.3, h=0.2)
    b0 = SolutionBasis(0.0, _wkb_data(prob, 0.0, 0.0))
    assert np.allclose(transfer_matrix(prob, b0, b0).m, np.eye(2), atol=1e-14)
    d = 0.7
    b1 = SolutionBasis(d, _wkb_data(prob, d, 0.0))
    ph = np.exp(1j * math.sqrt(1.3) * d / 0.2)
    assert np.allclose(transfer_matrix(prob, b0, b1).m, np.diag([ph, ph.conjugate()]), atol=1e-12)


def test_free_jost_is_identity():
    prob = ScatteringProblem(PotentialSpec(), lam=2.0, h=0.1)
    assert np.allclose(total_transfer(prob).m, np.eye(2), atol=1e-12)
    assert np.allclose(smatrix_qm(prob).m, np.eye(2), atol=1e-12)


@pytest.mark.parametrize("g, x0", [(0.3, 0.0), (-0.5, 0.4), (1.7, -1.1)])
def test_delta_against_closed_form(g, x0):
    lam, h = 1.2, 0.4
    prob = ScatteringProblem(PotentialSpec([Delta(g, x0)]), lam=lam, h=h)
    T = total_transfer(prob)
    Ta = delta_transfer_analytic(g, x0, lam, h)
    assert np.abs(T.m - Ta.m).max() < 1e-10
    assert abs(abs(T.p) ** 2 - abs(T.q) ** 2 - 1) < 1e-10
    S = smatrix_qm(prob)
    assert S.a == pytest.approx(1 / (1 + 1j * g / (2 * h * math.sqrt(lam))), abs=1e-10)


@pytest.mark.parametrize("lam", [1.1, 1.6, 3.0])
def test_eckart_over_barrier(lam):
    A, w, h = 1.0, 1.0, 0.3
    S = smatrix_qm(ScatteringProblem(PotentialSpec([Sech2(A, 0.0, w)]), lam=lam, h=h))
    assert abs(abs(S.a) ** 2 - eckart_transmission(A, w, lam, h)) < 1e-4


def test_single_barrier_coin_is_smatrix():
    prob = ScatteringProblem(PotentialSpec([Gaussian(1.0, 0.3, 0.6)]), lam=0.7, h=0.1)
    c = coins_from_potential(prob)
    assert c.n0 == 1
    assert np.abs(c[1].m - smatrix_qm(prob).m).max() < 1e-8


def test_symmetric_barriers_give_matching_coin_moduli():
    prob = ScatteringProblem(double_gaussian(), lam=0.8, h=0.05)
    c = coins_from_potential(prob)
    assert np.allclose(np.abs(c[1].m), np.abs(c[2].m), atol=1e-8)


def test_all_routes_agree_on_double_barrier():
    prob = ScatteringProblem(double_gaussian(), lam=0.85, h=0.05)
    c = coins_from_potential(prob)
    S = smatrix_qm(prob).m
    assert np.abs(S - smatrix_stationary(c).m).max() < 1e-7
    assert np.abs(S - star_fold(c.coins).m).max() < 1e-7
    assert np.abs(S @ S.conj().T - np.eye(2)).max() < 1e-8
    assert prob.max_wronskian_drift() < 1e-8


@pytest.mark.parametrize("boundary", ["in_minus", "out_minus", "in_plus", "out_plus"])
def test_stationary_states_solve_transfer_recurrence(boundary):
    prob = ScatteringProblem(double_gaussian(), lam=0.8, h=0.1)
    Ts = interval_transfer_matrices(prob)
    c = coins_from_potential(prob)
    eta = eta_from_state(stationary_state(c, boundary))
    for n, T in enumerate(Ts, start=1):
        assert np.abs(eta[n - 1] - T.m @ eta[n]).max() < 1e-8 * max(1.0, np.abs(eta).max())


def test_coins_need_a_barrier():
    with pytest.raises(ValueError):
        coins_from_potential(ScatteringProblem(PotentialSpec([Gaussian(0.5)]), lam=1.0, h=0.1))


def test_jost_phase_correction():
    # WKB tail phase: with a slowly decaying bump the Jost data stays on the exact solution
    prob = ScatteringProblem(PotentialSpec([Sech2(0.3, 0.0, 2.0)]), lam=1.0, h=0.2)
    left, right = jost_basis(prob)
    assert left.wronskian(prob.h) == pytest.approx(2j / prob.h)
    S = smatrix_qm(prob)
    assert abs(abs(S.a) ** 2 - eckart_transmission(0.3, 2.0, 1.0, 0.2)) < 1e-6
