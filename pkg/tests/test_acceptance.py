"""
Acceptance suite: one test per criterion, each printing a single
``CRITERION n: PASS|FAIL`` line with the measured quantity and runtime.

The lines are collected and repeated in the pytest terminal summary (see
``conftest.py``); running this file directly prints them as well.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from walkscatter.barrier_top import (
    barrier_data,
    coin_deviation,
    hadamard_deviation,
    modulus_deviation,
    penetration_factor,
    principal_coins,
)
from walkscatter.coin_algebra import m_inverse, m_map, random_coin, random_transfer, star_fold
from walkscatter.potentials import Delta, Gaussian, PotentialSpec, Sech2, double_gaussian
from walkscatter.path_sum import amplitude, enumerate_paths, layers, series_matrix, smatrix_series
from walkscatter.schrodinger import (
    ScatteringProblem,
    coins_from_potential,
    decompose,
    delta_transfer_analytic,
    interval_transfer_matrices,
    smatrix_qm,
    total_transfer,
)
from walkscatter.walk import CoinSequence, build_e_matrix, fit_tail_bound, pulse_evolution, smatrix_stationary, spectral_radius

RESULTS: list[str] = []


def report(n: int, ok: bool, runtime: float, limit: float, **measured: float) -> None:
    ok = ok and runtime < limit
    vals = " ".join(f"{k}={v:.3e}" if isinstance(v, float) else f"{k}={v}" for k, v in measured.items())
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {vals}  runtime={runtime:.2f}s (limit {limit:g}s)"
    RESULTS.append(line)
    print(line)
    assert ok, line


def conservation(prob: ScatteringProblem, S: np.ndarray) -> dict[str, float]:
    """Wronskian drift, det of every transfer matrix and unitarity of ``S``."""
    dets = [abs(np.linalg.det(total_transfer(prob).m) - 1)]
    if decompose(prob).n0 >= 1:
        dets += [abs(np.linalg.det(T.m) - 1) for T in interval_transfer_matrices(prob)]
    return {
        "drift": prob.max_wronskian_drift(),
        "det": float(max(dets)),
        "unitarity": float(np.abs(S @ S.conj().T - np.eye(2)).max()),
    }


def conserved(c: dict[str, float]) -> bool:
    return c["drift"] < 1e-8 and c["det"] < 1e-9 and c["unitarity"] < 1e-8


def eckart_transmission(A: float, w: float, lam: float, h: float) -> float:
    """Closed-form transmission of ``A sech^2(x / w)`` for ``-h^2 u'' + V u = lam u``."""
    k = math.sqrt(lam) / h
    s = 4 * A * w * w / (h * h) - 1
    c = math.cosh(0.5 * math.pi * math.sqrt(s)) ** 2 if s > 0 else math.cos(0.5 * math.pi * math.sqrt(-s)) ** 2
    sh = math.sinh(math.pi * k * w) ** 2
    return sh / (sh + c)


def test_criterion_1_algebra_roundtrip():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    Ts = [random_transfer(rng, qmax=10.0) for _ in range(1000)]
    err_inv = max(float(np.abs(m_inverse(m_map(T)).m - T.m).max()) for T in Ts)
    err_hom = 0.0
    for T1, T2 in zip(Ts, Ts[1:] + Ts[:1]):
        lhs = m_map(T1 @ T2).m
        rhs = star_fold([m_map(T1), m_map(T2)]).m
        err_hom = max(err_hom, float(np.abs(lhs - rhs).max()))
    dt = time.perf_counter() - t0
    report(1, err_inv < 1e-12 and err_hom < 1e-12, dt, 1.0, roundtrip=err_inv, homomorphism=err_hom)


def test_criterion_2_layer_identity():
    rng = np.random.default_rng(2)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        n0 = int(rng.integers(1, 5))
        c = CoinSequence([random_coin(rng) for _ in range(n0)])
        for k in (1, 2):
            lays = []
            for L, lay in enumerate(layers(c, k), start=1):
                lays.append(lay)
                if L >= 14:
                    break
            for j in (1, 2):
                for L in range(1, 15):
                    brute = sum((amplitude(c, p) for p in enumerate_paths(c, j, k, L)), 0j)
                    worst = max(worst, abs(brute - lays[L - 1][j - 1]))
    dt = time.perf_counter() - t0
    report(2, worst < 1e-12, dt, 30.0, max_error=worst)


def test_criterion_3_series_route_equality():
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    worst, accepted = 0.0, 0
    while accepted < 100:
        n0 = int(rng.integers(1, 7))
        c = CoinSequence([random_coin(rng) for _ in range(n0)])
        if spectral_radius(build_e_matrix(c)) > 0.95:
            continue
        accepted += 1
        S = series_matrix(smatrix_series(c, tol=1e-10, keep_layers=False))
        A, B = star_fold(c.coins).m, smatrix_stationary(c).m
        worst = max(worst, float(np.abs(S - A).max()), float(np.abs(S - B).max()), float(np.abs(A - B).max()))
    dt = time.perf_counter() - t0
    report(3, worst < 1e-9, dt, 30.0, max_pairwise=worst, sequences=accepted)


def test_criterion_4_spectral_bound():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    violations, rho_max = 0, 0.0
    for _ in range(20):
        n0 = int(rng.integers(1, 7))
        c = CoinSequence([random_coin(rng) for _ in range(n0)])
        e = build_e_matrix(c)
        rho_max = max(rho_max, spectral_radius(e))
        bound = fit_tail_bound(e)
        for k in (1, 2):
            for L, state in enumerate(pulse_evolution(c, k)):
                if L > 200:
                    break
                if L == 0:
                    continue
                measured = max((float(np.linalg.norm(v)) for n, v in state.items() if abs(n) < e.N0), default=0.0)
                if measured > bound(L) * (1 + 1e-12):
                    violations += 1
    dt = time.perf_counter() - t0
    report(4, violations == 0 and rho_max < 1, dt, 10.0, violations=violations, rho_max=rho_max)


def test_criterion_5_delta_barrier():
    g, lam, h = 0.7, 1.0, 0.2
    t0 = time.perf_counter()
    # a zero-height smooth term forces the adaptive ODE integrator instead of the free propagator
    ode = ScatteringProblem(PotentialSpec([Delta(g, 0.0), Gaussian(0.0)]), lam=lam, h=h)
    plain = ScatteringProblem(PotentialSpec([Delta(g, 0.0)]), lam=lam, h=h)
    S_ode = smatrix_qm(ode).m
    S_jump = m_map(delta_transfer_analytic(g, 0.0, lam, h)).m
    S_walk = smatrix_stationary(coins_from_potential(plain)).m
    dev = max(float(np.abs(S_ode - S_jump).max()), float(np.abs(S_ode - S_walk).max()), float(np.abs(S_jump - S_walk).max()))
    flux = abs(abs(S_ode[0, 0]) ** 2 + abs(S_ode[1, 0]) ** 2 - 1)
    cons = conservation(ode, S_ode)
    dt = time.perf_counter() - t0
    report(5, dev < 1e-8 and flux < 1e-10 and conserved(cons), dt, 5.0, route_deviation=dev, flux=flux, **cons)


def test_criterion_6_eckart():
    A, w, h = 1.0, 1.0, 0.3
    t0 = time.perf_counter()
    worst, cons_all = 0.0, []
    for lam in (1.1, 1.3, 1.6, 2.0, 3.0):
        prob = ScatteringProblem(PotentialSpec([Sech2(A, 0.0, w)]), lam=lam, h=h)
        S = smatrix_qm(prob).m
        worst = max(worst, abs(abs(S[0, 0]) ** 2 - eckart_transmission(A, w, lam, h)))
        cons_all.append(conservation(prob, S))
    cons = {k: max(c[k] for c in cons_all) for k in cons_all[0]}
    dt = time.perf_counter() - t0
    report(6, worst < 1e-4 and conserved(cons), dt, 30.0, transmission_error=worst, **cons)


def test_criterion_7_double_gaussian_routes():
    t0 = time.perf_counter()
    prob = ScatteringProblem(double_gaussian(), lam=0.8, h=0.05)
    S_qm = smatrix_qm(prob).m
    S_walk = smatrix_stationary(coins_from_potential(prob)).m
    dev = float(np.abs(S_qm - S_walk).max())
    cons = conservation(prob, S_qm)
    dt = time.perf_counter() - t0
    report(7, dev < 1e-7 and conserved(cons), dt, 60.0, route_deviation=dev, **cons)


def test_criterion_8_penetration_factor():
    t0 = time.perf_counter()
    e0 = abs(penetration_factor(0) - math.sqrt(2))
    e_large = max(abs(abs(penetration_factor(1j * y)) - 1) for y in (1e3, -1e3))
    e1 = abs(penetration_factor(1) - 2 * math.sqrt(2) / math.e)
    dt = time.perf_counter() - t0
    report(8, e0 < 1e-12 and e_large < 1e-3 and e1 < 1e-10, dt, 1.0, N0_error=e0, large_y_error=e_large, N1_error=e1)


def test_criterion_9_hadamard_limit():
    V = double_gaussian()
    t0 = time.perf_counter()
    V0 = barrier_data(ScatteringProblem(V, lam=0.5, h=0.1))[0].V0
    # the deviation is about pi h / 8 for this fixture, so < 1e-6 needs h of order 1e-6
    h_top = 1e-6
    had = hadamard_deviation(principal_coins(ScatteringProblem(V, lam=V0 - h_top**2, h=h_top)))
    mod, ent = [], []
    for h in (0.2, 0.1, 0.05, 0.025):
        prob = ScatteringProblem(V, lam=V0 - h * h, h=h)
        dec = decompose(prob)
        num = coins_from_potential(prob, dec)
        mod.append(modulus_deviation(principal_coins(prob, dec), num))
        ent.append(coin_deviation(principal_coins(prob, dec, gauge="jost"), num))
    decreasing = all(a > b for a, b in zip(mod, mod[1:])) and all(a > b for a, b in zip(ent, ent[1:]))
    dt = time.perf_counter() - t0
    report(9, had < 1e-6 and decreasing, dt, 120.0, hadamard_deviation=had,
           modulus_sweep="/".join(f"{v:.3g}" for v in mod), entry_sweep="/".join(f"{v:.3g}" for v in ent))


def test_criterion_10_conservation():
    # asserted inside criteria 5-7; re-measured here over all their integrations,
    # within the combined runtime budget of those criteria
    t0 = time.perf_counter()
    probs = [
        (ScatteringProblem(PotentialSpec([Delta(0.7, 0.0), Gaussian(0.0)]), lam=1.0, h=0.2)),
        *(ScatteringProblem(PotentialSpec([Sech2(1.0, 0.0, 1.0)]), lam=lam, h=0.3) for lam in (1.1, 1.3, 1.6, 2.0, 3.0)),
        ScatteringProblem(double_gaussian(), lam=0.8, h=0.05),
    ]
    cons_all = [conservation(p, smatrix_qm(p).m) for p in probs]
    cons = {k: max(c[k] for c in cons_all) for k in cons_all[0]}
    dt = time.perf_counter() - t0
    report(10, conserved(cons), dt, 95.0, **cons)


if __name__ == "__main__":  # pragma: no cover
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
