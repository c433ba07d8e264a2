import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings

from walkscatter.coin_algebra import UnitaryCoin, hadamard_coin, identity_coin, random_coin, star_fold
from walkscatter.errors import EnumerationCapExceeded, NonConsecutivePath, SlowConvergence
from walkscatter.path_sum import (
    Arc,
    WalkPath,
    amplitude,
    enumerate_paths,
    layer_counts,
    layers,
    layers_csv,
    partial_sum,
    series_matrix,
    smatrix_series,
)
from walkscatter.walk import CoinSequence, build_e_matrix, fit_tail_bound, smatrix_stationary

from conftest import coin_sequences

H = hadamard_coin()


def test_arc_endpoints():
    assert Arc(3, "L").origin == 4 and Arc(3, "L").terminus == 3
    assert Arc(3, "R").origin == 2
    with pytest.raises(ValueError):
        Arc(1, "X")


def test_single_factor_amplitudes(rng):
    u = random_coin(rng)
    c = CoinSequence([u])
    assert amplitude(c, WalkPath((Arc(1, "L"), Arc(0, "L")))) == pytest.approx(u.a)
    assert amplitude(c, WalkPath((Arc(1, "L"), Arc(2, "R")))) == pytest.approx(u.c)
    assert amplitude(c, WalkPath((Arc(1, "R"), Arc(0, "L")))) == pytest.approx(u.b)
    assert amplitude(c, WalkPath((Arc(1, "R"), Arc(2, "R")))) == pytest.approx(u.a)


def test_hadamard_loop_modulus():
    c = CoinSequence([H, H])
    direct = enumerate_paths(c, 1, 1, 2)[0]
    looped = enumerate_paths(c, 1, 1, 4)[0]
    assert abs(amplitude(c, looped)) == pytest.approx(abs(amplitude(c, direct)) * 0.5)


def test_non_consecutive_path():
    with pytest.raises(NonConsecutivePath):
        WalkPath((Arc(2, "L"), Arc(3, "L")))


def test_counts_single_coin():
    counts = layer_counts(CoinSequence([H]), 1, 1, 8)
    assert counts[1] == 1 and sum(counts) == 1


def test_counts_two_coins():
    counts = layer_counts(CoinSequence([H, H]), 1, 1, 9)
    assert counts[2] == counts[4] == counts[6] == counts[8] == 1
    assert counts[3] == counts[5] == counts[7] == 0


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        enumerate_paths(CoinSequence([H]), 1, 1, 25)


def test_partial_sum_examples(rng):
    c = CoinSequence([random_coin(rng) for _ in range(3)])
    assert partial_sum(c, 1, 1, 1) == 0  # shorter than the crossing
    u = random_coin(rng)
    assert partial_sum(CoinSequence([u]), 1, 1, 1) == pytest.approx(u.a)
    with pytest.raises(ValueError):
        partial_sum(c, 1, 1, 0)


def test_series_examples():
    res = series_matrix(smatrix_series(CoinSequence([identity_coin()] * 3)))
    assert np.allclose(res, np.eye(2), atol=1e-15)
    u = UnitaryCoin(np.array([[0.6, 0.8j], [0.8j, 0.6]]))
    assert np.allclose(series_matrix(smatrix_series(CoinSequence([u]))), u.m, atol=1e-15)


def test_series_hadamard_pair():
    out = smatrix_series(CoinSequence([H, H]), tol=1e-10)
    s = series_matrix(out)
    assert np.abs(s - star_fold([H, H]).m).max() < 1e-10
    assert abs(s[0, 0]) == pytest.approx(1 / 3, abs=1e-10)
    r = out[0][0]
    assert r.error_bound < 1e-10
    # truncation consistent with rho = 1/sqrt 2: the bound must really have decayed
    tb = fit_tail_bound(build_e_matrix(CoinSequence([H, H])))
    assert tb.tail_sum(r.truncation_L) < 1e-10 <= tb.tail_sum(r.truncation_L - 1)
    # absolute convergence, dominated by the bound
    assert all(abs(x) <= b * (1 + 1e-12) for x, b in zip(r.per_length_partial_sums, r.bounds))


def test_series_slow_convergence():
    a = 0.02
    coin = UnitaryCoin(np.array([[a, np.sqrt(1 - a * a)], [-np.sqrt(1 - a * a), a]]))
    with pytest.raises(SlowConvergence):
        smatrix_series(CoinSequence([coin, coin]), tol=1e-12, max_L=50)


@given(coin_sequences(max_n0=4))
@settings(max_examples=25)
def test_layer_identity(c):
    for k in (1, 2):
        for L, lay in enumerate(layers(c, k), start=1):
            for j in (1, 2):
                brute = sum(amplitude(c, p) for p in enumerate_paths(c, j, k, L))
                assert abs(brute - lay[j - 1]) < 1e-12
            if L >= 10:
                break


@given(coin_sequences(max_n0=5, amin=0.3))
@settings(max_examples=25)
def test_series_matches_stationary(c):
    s = series_matrix(smatrix_series(c, tol=1e-10, keep_layers=False))
    assert np.abs(s - smatrix_stationary(c).m).max() < 1e-9


def test_layers_csv_columns():
    text = layers_csv(CoinSequence([H, H]), 1, 1, 6)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["L", "count", "layer_real", "layer_imag", "cumulative_real", "cumulative_imag", "bound"]
    assert len(rows) == 7 and rows[2][1] == "1" and rows[3][1] == "0"
