"""
Barrier-top semiclassics: actions, Agmon distances, the penetration factor and
the principal coins of the walk.

For energies just below a non-degenerate maximum ``V0`` of the potential the
transfer matrices factor into tail/arc propagations (pure phases from the
actions ``S_-``, ``S_n``, ``S_+``) and a barrier-top connection matrix

    T_o = e^{B/h} [[N^+, 1], [1, N^-]],   N^{+-} = N(+-i B / (pi h)),

where ``B`` is the Agmon distance across the barrier and
``N(z) = sqrt(2 pi) / Gamma(1/2 + z) * exp(z log(z / e))``.
Dropping the ``O(h log h)`` corrections gives the principal coins ``U_n^0``;
at ``V0 - lam = o(h)`` every entry has modulus ``1/sqrt(2)`` (a Hadamard-type walk).

Phase convention: the left tail basis is ``g_0 ~ lam^(-1/4) e^{-i sqrt(lam) x / h}``
(the outgoing Jost solution), which makes the left tail transfer
``T^- = diag(e^{-i S_-/h}, e^{i S_-/h})``. The coins below are written for that
basis, so they are directly comparable with ``coins_from_potential``.
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from .coin_algebra import TransferMatrix, UnitaryCoin, m_map
from .errors import BranchCut
from .gamma import loggamma
from .quadrature import QUAD_TOL, tail_integral, turning_point_integral
from .schrodinger import IntervalDecomposition, ScatteringProblem, decompose
from .walk import CoinSequence

__all__ = [
    "penetration_factor",
    "BarrierData",
    "ActionSet",
    "EnergyWindow",
    "actions",
    "agmon",
    "barrier_data",
    "principal_coins",
    "principal_transfer_matrices",
    "hadamard_deviation",
    "coin_deviation",
    "modulus_deviation",
    "barrier_top_csv",
]

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def penetration_factor(z: complex) -> complex:
    """Barrier penetration factor ``N(z)`` on the principal branch.

    ``N(0) = sqrt(2)`` (limit value). ``|N(iy)|^2 = 1 + e^{-2 pi |y|}`` for real y.

    Raises
    ------
    BranchCut
        For ``z`` on the negative real axis, where ``arg z = pi``.
    """
    z = complex(z)
    if z == 0:
        return complex(math.sqrt(2.0))
    if z.imag == 0.0 and z.real < 0:
        raise BranchCut(f"N(z) is not defined on the cut arg z = pi (z = {z})")
    log_n = _HALF_LOG_2PI - loggamma(0.5 + z) + z * (cmath.log(z) - 1.0)
    return cmath.exp(log_n)


# --- data types -----------------------------------------------------------------


@dataclass(frozen=True)
class BarrierData:
    """Barrier-top data of one barrier ``K_n = [x_left, x_right]`` at a given ``(lam, h)``."""

    o: float
    V0: float
    x_left: float
    x_right: float
    B: float
    N_plus: complex
    N_minus: complex


@dataclass(frozen=True)
class ActionSet:
    """Arc actions ``S_1..S_{n0-1}`` and regularised tail actions ``S_-``, ``S_+``."""

    interior: tuple[float, ...]
    S_minus: float
    S_plus: float
    error: float = 0.0


@dataclass(frozen=True)
class EnergyWindow:
    """``Lambda_h(C) = V0 - [h^M, C0 h]``."""

    V0: float
    h: float
    C0: float = 1.0
    M_exp: float = 2.0

    def __post_init__(self) -> None:
        if self.C0 <= 0:
            raise ValueError("C0 must be positive")
        if self.M_exp <= 1:
            raise ValueError("M_exp must exceed 1")
        if not self.h**self.M_exp < self.C0 * self.h:
            raise ValueError(f"empty window: h^M = {self.h ** self.M_exp:g} >= C0 h = {self.C0 * self.h:g}")

    @property
    def lower(self) -> float:
        return self.V0 - self.C0 * self.h

    @property
    def upper(self) -> float:
        return self.V0 - self.h**self.M_exp

    def contains(self, lam: float, rtol: float = 1e-12) -> bool:
        slack = rtol * max(1.0, abs(self.V0))
        return self.lower - slack <= lam <= self.upper + slack

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.lower, self.upper, n)


# --- integrals ------------------------------------------------------------------


def _sqrt_gap(prob: ScatteringProblem, sign: float):
    V, lam = prob.potential, prob.lam
    return lambda x: math.sqrt(max(sign * (lam - float(V(x))), 0.0))


def actions(prob: ScatteringProblem, dec: IntervalDecomposition | None = None, tol: float = QUAD_TOL) -> ActionSet:
    """Arc actions ``S_n = int_{I_n} sqrt(lam - V)`` and the tail actions

    ``S_- = int_{-inf}^{x_1} (sqrt(lam) - sqrt(lam - V)) - sqrt(lam) x_1``,
    ``S_+ = int_{x_{2 n0}}^{inf} (sqrt(lam) - sqrt(lam - V)) + sqrt(lam) x_{2 n0}``.
    """
    dec = decompose(prob) if dec is None else dec
    if dec.n0 < 1:
        raise ValueError("actions need at least one barrier")
    p = _sqrt_gap(prob, 1.0)
    sq = math.sqrt(prob.lam)
    bps = prob.potential.breakpoints()
    tp = dec.turning_points
    S, err = [], 0.0
    for n in range(1, dec.n0):
        lo, hi = tp[2 * n - 1], tp[2 * n]
        v, e = turning_point_integral(
            p, lo, hi, sing_left=not dec.point_barrier[n - 1], sing_right=not dec.point_barrier[n],
            tol=tol, breakpoints=bps,
        )
        S.append(v)
        err += e
    X = float(prob.x_inf)
    q = lambda x: sq - p(x)
    x1, x2 = tp[0], tp[-1]
    a, e1 = turning_point_integral(q, -X, x1, sing_left=False, sing_right=not dec.point_barrier[0], tol=tol, breakpoints=bps)
    b, e2 = tail_integral(q, -X, -1, tol)
    S_minus = a + b - sq * x1
    c, e3 = turning_point_integral(q, x2, X, sing_left=not dec.point_barrier[-1], sing_right=False, tol=tol, breakpoints=bps)
    d, e4 = tail_integral(q, X, +1, tol)
    S_plus = c + d + sq * x2
    return ActionSet(tuple(S), S_minus, S_plus, err + e1 + e2 + e3 + e4)


def agmon(prob: ScatteringProblem, dec: IntervalDecomposition | None = None, tol: float = QUAD_TOL) -> list[float]:
    """Agmon distances ``B_n = int_{K_n} sqrt(V - lam)``; zero for delta barriers."""
    dec = decompose(prob) if dec is None else dec
    g = _sqrt_gap(prob, -1.0)
    out = []
    for (lo, hi), point in zip(dec.barriers, dec.point_barrier):
        if point:
            out.append(0.0)
            continue
        # B can be far below 1 near the top: make the tolerance relative to its size,
        # floored by the cancellation error of V - lam (about eps * |lam| per point)
        gap = max(float(prob.potential(0.5 * (lo + hi))) - prob.lam, 1e-300)
        scale = (hi - lo) * math.sqrt(gap)
        floor = 10 * (hi - lo) * 2.2e-16 * max(1.0, abs(prob.lam)) / math.sqrt(gap)
        v, _ = turning_point_integral(g, lo, hi, tol=max(tol * min(1.0, scale), floor),
                                      breakpoints=prob.potential.breakpoints())
        out.append(v)
    return out


def _barrier_max(prob: ScatteringProblem, lo: float, hi: float) -> float:
    V = prob.potential
    res = optimize.minimize_scalar(lambda x: -float(V(x)), bounds=(lo, hi), method="bounded",
                                   options={"xatol": 1e-13})
    return float(res.x)


def barrier_data(prob: ScatteringProblem, dec: IntervalDecomposition | None = None) -> list[BarrierData]:
    dec = decompose(prob) if dec is None else dec
    out = []
    for (lo, hi), B in zip(dec.barriers, agmon(prob, dec)):
        o = _barrier_max(prob, lo, hi) if hi > lo else lo
        y = B / (math.pi * prob.h)
        out.append(
            BarrierData(
                o=o,
                V0=float(prob.potential(o)),
                x_left=lo,
                x_right=hi,
                B=B,
                N_plus=penetration_factor(1j * y),
                N_minus=penetration_factor(-1j * y),
            )
        )
    return out


# --- principal coins ------------------------------------------------------------


def _principal_coin(sig_d: float, sig_o: float, B: float, N_minus: complex, h: float, tol: float) -> UnitaryCoin:
    """``e^{i sig_d / h} / N^- [[e^{-B/h}, e^{i sig_o/h}], [-e^{-i sig_o/h}, e^{-B/h}]]``.

    Algebraically the displayed ``e^{(i S - B)/h} / N^- [[1, e^{(B + i S)/h}], ...]``
    with the growing exponential cancelled by hand so that small ``h`` cannot overflow.
    """
    pref = cmath.exp(1j * sig_d / h) / N_minus
    d = math.exp(-B / h)
    m = pref * np.array([[d, cmath.exp(1j * sig_o / h)], [-cmath.exp(-1j * sig_o / h), d]])
    return UnitaryCoin(m, tol=tol)


def _phases(acts: ActionSet, n0: int) -> list[tuple[float, float]]:
    """``(sig_d, sig_o)`` per barrier: the arc phase entering from the left and,
    for the last barrier, the right tail phase."""
    left = [-acts.S_minus] + list(acts.interior)  # phase of the arc preceding barrier n
    out = []
    for n in range(1, n0 + 1):
        s = left[n - 1]
        if n == n0:
            out.append((s - acts.S_plus, s + acts.S_plus))
        else:
            out.append((s, s))
    return out


def principal_coins(
    prob: ScatteringProblem,
    dec: IntervalDecomposition | None = None,
    win: EnergyWindow | None = None,
    tol: float = 1e-10,
    gauge: str = "principal",
) -> CoinSequence:
    """Principal terms ``U_n^0`` of the coins.

    ``U_1`` carries the left tail phase, ``U_n`` the phase of the arc ``I_{n-1}``
    and ``U_{n0}`` additionally the right tail phase ``S_+``. For ``n0 = 1`` the
    single coin combines both tails.

    Parameters
    ----------
    gauge : {"principal", "jost"}
        ``"principal"`` returns the matrices exactly as factorised above.
        ``"jost"`` conjugates every coin by ``diag(1, i)``: the numerically exact
        coins of ``coins_from_potential`` carry an extra ``-i`` / ``+i`` on the
        off-diagonal entries (a quarter-period phase of the barrier-top
        connection in the WKB basis), and this gauge absorbs it so that the two
        can be compared entry by entry. Moduli are the same in both gauges.

    Raises
    ------
    ValueError
        If ``win`` is given and ``prob.lam`` lies outside it.
    """
    dec = decompose(prob) if dec is None else dec
    if win is not None and not win.contains(prob.lam):
        raise ValueError(f"lam = {prob.lam!r} is outside the window [{win.lower}, {win.upper}]")
    if gauge not in ("principal", "jost"):
        raise ValueError(f"unknown gauge {gauge!r}")
    acts = actions(prob, dec)
    data = barrier_data(prob, dec)
    coins = [_principal_coin(sd, so, bd.B, bd.N_minus, prob.h, tol) for (sd, so), bd in zip(_phases(acts, dec.n0), data)]
    if gauge == "jost":
        D = np.diag([1.0, 1j])
        coins = [UnitaryCoin(D @ c.m @ D.conj(), tol=tol) for c in coins]
    return CoinSequence(coins)


def principal_transfer_matrices(
    prob: ScatteringProblem, dec: IntervalDecomposition | None = None
) -> list[TransferMatrix]:
    """Principal ``T_n`` from the factorisation into tail, arc and barrier-top pieces.

    ``T_1 = T^- T_o1``, ``T_n = T_{I_{n-1}} T_on``, ``T_n0 = T_{I_{n0-1}} T_on0 (T^+)^{-1}``
    with ``T^- = diag(e^{-i S_-/h}, e^{i S_-/h})``, ``T^+ = diag(e^{i S_+/h}, e^{-i S_+/h})``,
    ``T_I = diag(e^{i S/h}, e^{-i S/h})`` and ``T_o = e^{B/h} [[N^+, 1], [1, N^-]]``.
    Only usable while ``e^{B/h}`` is representable.
    """
    dec = decompose(prob) if dec is None else dec
    acts, data, h = actions(prob, dec), barrier_data(prob, dec), prob.h
    ph = lambda s: np.diag([cmath.exp(1j * s / h), cmath.exp(-1j * s / h)])
    left = [ph(-acts.S_minus)] + [ph(s) for s in acts.interior]
    out = []
    for n, bd in enumerate(data, start=1):
        To = math.exp(bd.B / h) * np.array([[bd.N_plus, 1.0], [1.0, bd.N_minus]])
        T = left[n - 1] @ To
        if n == dec.n0:
            T = T @ ph(-acts.S_plus)
        out.append(TransferMatrix(T, tol=1e-9))
    return out


# --- diagnostics ------------------------------------------------------------------


def hadamard_deviation(coins: CoinSequence | Sequence[UnitaryCoin]) -> float:
    """``max | |U_n[i, j]|^2 - 1/2 |`` over coins and entries."""
    cs = coins.coins if isinstance(coins, CoinSequence) else coins
    return float(max(np.abs(np.abs(c.m) ** 2 - 0.5).max() for c in cs))


def coin_deviation(a: CoinSequence, b: CoinSequence) -> float:
    """Largest entrywise ``|U_n^a - U_n^b|``."""
    if a.n0 != b.n0:
        raise ValueError("coin sequences differ in length")
    return float(max(np.abs(x.m - y.m).max() for x, y in zip(a.coins, b.coins)))


def modulus_deviation(a: CoinSequence, b: CoinSequence) -> float:
    """Largest entrywise ``| |U_n^a|^2 - |U_n^b|^2 |``, insensitive to phases."""
    if a.n0 != b.n0:
        raise ValueError("coin sequences differ in length")
    return float(max(np.abs(np.abs(x.m) ** 2 - np.abs(y.m) ** 2).max() for x, y in zip(a.coins, b.coins)))


def barrier_top_csv(rows: Sequence[tuple[float, float, ScatteringProblem]]) -> str:
    """CSV over a ``(lam, h)`` grid of problems: Agmon distances, actions, ``|N^+-|``,
    Hadamard deviation and per-entry ``|U|^2`` of the principal coins."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lam", "h", "n", "B_n", "S_n", "S_minus", "S_plus", "abs_N_plus", "abs_N_minus",
                "hadamard_deviation", "U11_sq", "U12_sq", "U21_sq", "U22_sq"])
    for lam, h, prob in rows:
        dec = decompose(prob)
        acts, data = actions(prob, dec), barrier_data(prob, dec)
        coins = principal_coins(prob, dec)
        dev = hadamard_deviation(coins)
        for n, (bd, c) in enumerate(zip(data, coins.coins), start=1):
            S_n = acts.interior[n - 1] if n <= len(acts.interior) else ""
            sq = np.abs(c.m) ** 2
            w.writerow([repr(lam), repr(h), n, repr(bd.B), repr(S_n) if S_n != "" else "",
                        repr(acts.S_minus), repr(acts.S_plus), repr(abs(bd.N_plus)), repr(abs(bd.N_minus)),
                        repr(dev), *(repr(float(v)) for v in sq.ravel())])
    return buf.getvalue()
