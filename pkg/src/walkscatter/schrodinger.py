"""
One-dimensional scattering for ``-h^2 phi'' + V phi = lam phi``.

Solutions are carried as pairs ``(phi, h phi')``. The real fundamental system
of the ODE is integrated once per pair of points (cached), so every complex
solution is transported by a real 2x2 propagator whose determinant is the
conserved Wronskian. Delta terms enter as jumps of ``h phi'``.

Bases of solutions are normalised so that ``W(g, conj g) = 2i/h``:

- left tail:  ``g_0 = lam^(-1/4) J_out^-``, behaving like ``lam^(-1/4) e^{-i sqrt(lam) x / h}``
- right tail: ``g_n0 = lam^(-1/4) J_in^+``, same behaviour at ``+inf``
- interior allowed interval ``(x_2n, x_2n+1)``: the exact solution with first-order
  WKB data ``(lam - V)^(-1/4) exp(-i int_{x_2n}^x sqrt(lam - V) / h)`` at the
  bottom of the well.

The transfer matrix ``T_n`` expresses ``(g_n, conj g_n)`` in the basis
``(g_{n-1}, conj g_{n-1})`` and ``m_map(T_n)`` is the coin of barrier n.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy import integrate, optimize

from .coin_algebra import TransferMatrix, UnitaryCoin, m_map
from .errors import (
    DependentPair,
    NumericalError,
    StepUnderflow,
    TangentTurningPoint,
    TruncationTooSmall,
)
from .potentials import PotentialSpec
from .quadrature import tail_integral, turning_point_integral
from .walk import CoinSequence, WalkState

__all__ = [
    "ScatteringProblem",
    "IntervalDecomposition",
    "SolutionBasis",
    "decompose",
    "critical_points",
    "propagator",
    "integrate_solution",
    "wronskian",
    "jost_basis",
    "interval_bases",
    "transfer_matrix",
    "matching_point",
    "interval_transfer_matrices",
    "total_transfer",
    "smatrix_qm",
    "coins_from_potential",
    "eta_from_state",
    "delta_transfer_analytic",
    "TOL_QM",
    "TOL_WRONSKIAN",
]

TOL_QM = 1e-7
TOL_WRONSKIAN = 1e-8
TOL_TURN = 1e-13


@dataclass(frozen=True, eq=False)
class ScatteringProblem:
    """Potential, energy ``lam > 0`` and semiclassical parameter ``h``.

    ``x_inf`` defaults to the radius beyond which ``|V| < 1e-3 lam sqrt(ode_tol)``
    (plus a unit margin), capped at 1e3.
    """

    potential: PotentialSpec
    lam: float
    h: float
    x_inf: float | None = None
    ode_tol: float = 1e-10
    tol_match: float = 1e-6
    _cache: dict = field(default_factory=dict, repr=False)
    diagnostics: dict = field(default_factory=lambda: {"wronskian_drift": []}, repr=False)

    def __post_init__(self) -> None:
        if not self.lam > 0:
            raise ValueError("energy lam must be positive")
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.x_inf is None:
            thr = 1e-3 * self.lam * math.sqrt(self.ode_tol)
            r = self.potential.truncation_radius(thr)
            object.__setattr__(self, "x_inf", min(r + 1.0, 1e3))
        X = float(self.x_inf)
        tail = max(abs(self.potential(X)), abs(self.potential(-X)))
        if tail >= self.lam:
            raise TruncationTooSmall(f"|V(+-x_inf)| = {tail:g} is not below lam = {self.lam:g}")
        if tail > self.tol_match * self.lam:
            raise TruncationTooSmall(
                f"|V| = {tail:.3g} at x_inf = {X:g} exceeds tol_match * lam; enlarge x_inf"
            )

    @property
    def k(self) -> float:
        """Wavenumber ``sqrt(lam) / h`` of the free waves."""
        return math.sqrt(self.lam) / self.h

    def momentum(self, x):
        """Local ``sqrt(lam - V)``; zero where the region is forbidden."""
        return np.sqrt(np.maximum(self.lam - self.potential(x), 0.0))

    def max_wronskian_drift(self) -> float:
        d = self.diagnostics["wronskian_drift"]
        return max(d) if d else 0.0


# --- turning points --------------------------------------------------------------


def critical_points(V: PotentialSpec, a: float, b: float, n: int = 20001) -> list[float]:
    """Zeros of ``V'`` on ``(a, b)``, located on a grid then polished."""
    x = np.linspace(a, b, n)
    d = V.deriv(x)
    out = []
    for i in np.nonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0)[0]:
        out.append(optimize.brentq(V.deriv, x[i], x[i + 1], xtol=1e-15, rtol=1e-15))
    for i in np.nonzero(d == 0)[0]:
        if 0 < i < n - 1 and np.sign(d[i - 1]) != np.sign(d[i + 1]):
            out.append(float(x[i]))
    return sorted(set(out))


@dataclass(frozen=True)
class IntervalDecomposition:
    """Barriers ``K_n = [x_{2n-1}, x_{2n}]`` and the allowed intervals between them.

    ``point_barrier[n-1]`` marks a delta barrier (``x_{2n-1} == x_{2n}``).
    """

    turning_points: tuple[float, ...]
    point_barrier: tuple[bool, ...]

    @property
    def n0(self) -> int:
        return len(self.turning_points) // 2

    @property
    def barriers(self) -> list[tuple[float, float]]:
        tp = self.turning_points
        return [(tp[2 * i], tp[2 * i + 1]) for i in range(self.n0)]

    @property
    def allowed(self) -> list[tuple[float, float]]:
        """``I_0 .. I_n0`` with infinite outer ends."""
        tp = (-math.inf,) + self.turning_points + (math.inf,)
        return [(tp[2 * i], tp[2 * i + 1]) for i in range(self.n0 + 1)]


def _polish(V: PotentialSpec, lam: float, lo: float, hi: float) -> float:
    f = lambda x: float(V(x)) - lam
    x = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    d = float(V.deriv(x))
    if d != 0.0:
        xn = x - f(x) / d
        if lo <= xn <= hi and abs(f(xn)) < abs(f(x)):
            x = xn
    return x


def decompose(prob: ScatteringProblem, tol_turn: float = TOL_TURN) -> IntervalDecomposition:
    """Locate the turning points of ``V = lam`` and pair them into barriers."""
    V, lam, X = prob.potential, prob.lam, float(prob.x_inf)
    specials = sorted({-X, X, *critical_points(V, -X, X), *(b for b in V.breakpoints() if -X < b < X)})
    roots: list[float] = []
    f = lambda x: float(V(x)) - lam
    for x in specials:
        if f(x) == 0.0 or abs(f(x)) <= 1e-15 * max(lam, 1.0):
            if abs(float(V.deriv(x))) < tol_turn and x not in V.breakpoints():
                raise TangentTurningPoint(f"V touches lam at x = {x:.15g}")
    for u, v in zip(specials[:-1], specials[1:]):
        fu, fv = f(u), f(v)
        if fu == 0.0 and fv == 0.0:
            continue
        if fu * fv < 0:
            roots.append(_polish(V, lam, u, v))
        elif fv == 0.0 and v != specials[-1]:
            roots.append(v)
    # a jump of V across lam at a breakpoint acts as a turning point of its own
    for b in V.breakpoints():
        if -X < b < X:
            left, right = f(b - 1e-13 * max(1, abs(b))), f(b + 1e-13 * max(1, abs(b)))
            if left * right < 0 and not any(abs(r - b) < 1e-9 for r in roots):
                roots.append(b)
    roots = sorted(roots)
    if len(roots) % 2:
        raise NumericalError(f"odd number of turning points found: {roots}")
    for r in roots:
        if r not in V.breakpoints() and abs(float(V.deriv(r))) < tol_turn:
            raise TangentTurningPoint(f"degenerate turning point at x = {r:.15g}")
    pts: list[tuple[float, float, bool]] = [(roots[2 * i], roots[2 * i + 1], False) for i in range(len(roots) // 2)]
    for d in V.deltas:
        if not any(lo <= d.x0 <= hi for lo, hi, _ in pts):
            pts.append((d.x0, d.x0, True))
    pts.sort()
    tps: list[float] = []
    for lo, hi, _ in pts:
        tps += [lo, hi]
    return IntervalDecomposition(tuple(tps), tuple(p[2] for p in pts))


# --- ODE transport ---------------------------------------------------------------


def _rhs(prob: ScatteringProblem):
    V, lam, h = prob.potential, prob.lam, prob.h

    def f(x, y):
        w = (float(V(x)) - lam) / h
        return np.array([y[1] / h, w * y[0], y[3] / h, w * y[2]])

    return f


def _segment(prob: ScatteringProblem, a: float, b: float) -> NDArray[np.float64]:
    if a == b:
        return np.eye(2)
    if not prob.potential.smooth_terms:
        # free motion: exact rotation of (phi, h phi') with frequency sqrt(lam) / h
        c, s = math.cos(prob.k * (b - a)), math.sin(prob.k * (b - a))
        sq = math.sqrt(prob.lam)
        return np.array([[c, s / sq], [-sq * s, c]])
    sol = integrate.solve_ivp(
        _rhs(prob),
        (a, b),
        np.array([1.0, 0.0, 0.0, 1.0]),
        method="DOP853",
        # a tenth of ode_tol per step keeps the accumulated error over tens of
        # wavelengths below ode_tol
        rtol=0.1 * prob.ode_tol,
        atol=1e-4 * prob.ode_tol,
    )
    if sol.status != 0:
        raise StepUnderflow(f"integration {a:g} -> {b:g} failed: {sol.message}")
    y = sol.y[:, -1]
    return np.array([[y[0], y[2]], [y[1], y[3]]])


def propagator(prob: ScatteringProblem, a: float, b: float) -> NDArray[np.float64]:
    """Real matrix taking ``(phi, h phi')`` at ``a`` to its value at ``b``.

    Integration is split at kinks of V and at delta positions; a delta at
    ``x0`` adds ``(g / h) phi(x0)`` to ``h phi'`` when crossed left to right.
    """
    key = (float(a), float(b))
    if key in prob._cache:
        return prob._cache[key]
    V, h = prob.potential, prob.h
    lo, hi = min(a, b), max(a, b)
    cuts = sorted({x for x in V.breakpoints() if lo < x < hi} | {d.x0 for d in V.deltas if lo < d.x0 < hi})
    jumps = {d.x0: d.g for d in V.deltas}
    forward = b >= a
    path = [a] + (cuts if forward else cuts[::-1]) + [b]
    P = np.eye(2)
    for u, v in zip(path[:-1], path[1:]):
        if u in jumps and u != a:
            g = jumps[u] / h
            J = np.array([[1.0, 0.0], [g if forward else -g, 1.0]])
            P = J @ P
        P = _segment(prob, u, v) @ P
    drift = abs(np.linalg.det(P) - 1.0)
    prob.diagnostics["wronskian_drift"].append(drift)
    prob._cache[key] = P
    return P


def integrate_solution(prob: ScatteringProblem, a: float, b: float, init: Sequence[complex]) -> NDArray[np.complex128]:
    """Transport initial data ``(phi, h phi')`` from ``a`` to ``b``."""
    if a == b:
        raise ValueError("integration endpoints coincide")
    return propagator(prob, a, b) @ np.asarray(init, dtype=np.complex128)


def wronskian(f: Sequence[complex], g: Sequence[complex], h: float) -> complex:
    """``W(f, g) = f g' - f' g`` from ``(value, h * derivative)`` pairs."""
    return complex((f[0] * g[1] - f[1] * g[0]) / h)


# --- bases -----------------------------------------------------------------------


@dataclass(frozen=True)
class SolutionBasis:
    """Solution ``g`` given by ``(g, h g')`` at ``x``; its conjugate completes the basis."""

    x: float
    data: tuple[complex, complex]
    label: str = ""

    def wronskian(self, h: float) -> complex:
        d = np.asarray(self.data)
        return wronskian(d, d.conj(), h)

    def at(self, prob: ScatteringProblem, x: float) -> NDArray[np.complex128]:
        if x == self.x:
            return np.asarray(self.data, dtype=np.complex128)
        return integrate_solution(prob, self.x, x, self.data)


def _wkb_data(prob: ScatteringProblem, x: float, theta: float) -> tuple[complex, complex]:
    """First-order WKB data for ``p^(-1/2) e^{-i theta}`` at ``x``."""
    p = math.sqrt(prob.lam - float(prob.potential(x)))
    dp = -float(prob.potential.deriv(x)) / (2.0 * p)
    val = cmath.exp(-1j * theta) / math.sqrt(p)
    return val, (-1j * p - prob.h * dp / (2.0 * p)) * val


def _tail_phase(prob: ScatteringProblem, side: int) -> float:
    """Phase ``theta(x)`` at ``side * x_inf`` with ``theta - sqrt(lam) x / h -> 0`` at that infinity."""
    X, lam, h = float(prob.x_inf), prob.lam, prob.h
    sq = math.sqrt(lam)
    corr = lambda y: math.sqrt(max(lam - float(prob.potential(y)), 0.0)) - sq
    if side < 0:
        c, _ = tail_integral(corr, -X, -1)
        return (-sq * X + c) / h
    c, _ = tail_integral(corr, X, +1)
    return (sq * X - c) / h


def jost_basis(prob: ScatteringProblem) -> tuple[SolutionBasis, SolutionBasis]:
    """``(lam^(-1/4) J_out^-, lam^(-1/4) J_in^+)`` as data at ``-x_inf`` and ``+x_inf``."""
    X = float(prob.x_inf)
    left = SolutionBasis(-X, _wkb_data(prob, -X, _tail_phase(prob, -1)), "J_out^-")
    right = SolutionBasis(X, _wkb_data(prob, X, _tail_phase(prob, +1)), "J_in^+")
    return left, right


def _well_bottom(prob: ScatteringProblem, lo: float, hi: float) -> float:
    V = prob.potential
    x = np.linspace(lo, hi, 2001)[1:-1]
    vals = V(x)
    if vals.max() - vals.min() < 1e-14:
        return 0.5 * (lo + hi)
    i = int(np.argmin(vals))
    a, b = x[max(i - 1, 0)], x[min(i + 1, len(x) - 1)]
    res = optimize.minimize_scalar(lambda t: float(V(t)), bounds=(a, b), method="bounded",
                                   options={"xatol": 1e-12})
    return float(res.x)


def interval_bases(prob: ScatteringProblem, dec: IntervalDecomposition | None = None) -> list[SolutionBasis]:
    """``g_0, ..., g_n0`` for the allowed intervals of ``dec``."""
    dec = decompose(prob) if dec is None else dec
    left, right = jost_basis(prob)
    bases = [left]
    lam, h = prob.lam, prob.h
    p = lambda y: math.sqrt(max(lam - float(prob.potential(y)), 0.0))
    for n in range(1, dec.n0):
        lo, hi = dec.turning_points[2 * n - 1], dec.turning_points[2 * n]
        xb = _well_bottom(prob, lo, hi)
        sing = not dec.point_barrier[n - 1]
        S, _ = turning_point_integral(p, lo, xb, sing_left=sing, sing_right=False,
                                      breakpoints=prob.potential.breakpoints())
        bases.append(SolutionBasis(xb, _wkb_data(prob, xb, S / h), f"g_{n}"))
    bases.append(right)
    return bases


def matching_point(prob: ScatteringProblem, lo: float, hi: float) -> float:
    """Midpoint of ``[lo, hi]``, nudged off any delta so data there is unambiguous."""
    m = 0.5 * (lo + hi)
    for d in prob.potential.deltas:
        if abs(d.x0 - m) < 1e-9:
            m += 0.25 * max(hi - lo, 1e-3) if hi > lo else 1e-3
    return m


def transfer_matrix(prob: ScatteringProblem, basis_left: SolutionBasis, basis_right: SolutionBasis,
                    match: float | None = None, tol: float = 1e-9) -> TransferMatrix:
    """Matrix ``T`` with ``(g_left, conj g_left) T = (g_right, conj g_right)``.

    Both solutions are transported to ``match`` (default: the right base point)
    and the coefficients are read off from Wronskians there. Matching inside the
    barrier keeps each transport's growth to about half the tunnelling factor.
    """
    h = prob.h
    m = basis_right.x if match is None else match
    gl = basis_left.at(prob, m)
    gr = basis_right.at(prob, m)
    glc, grc = gl.conj(), gr.conj()
    w0 = wronskian(gl, glc, h)
    ref = basis_left.wronskian(h)
    if abs(w0 - ref) > TOL_WRONSKIAN * abs(ref):
        raise NumericalError(f"Wronskian drifted from {ref} to {w0}")
    if abs(wronskian(gl, grc, h)) < 1e-10 * abs(w0):
        raise DependentPair("g_{n-1} and conj(g_n) are linearly dependent")
    T = np.array(
        [
            [wronskian(gr, glc, h) / w0, wronskian(grc, glc, h) / w0],
            [wronskian(gl, gr, h) / w0, wronskian(gl, grc, h) / w0],
        ]
    )
    return TransferMatrix(T, tol=tol)


def interval_transfer_matrices(prob: ScatteringProblem, dec: IntervalDecomposition | None = None) -> list[TransferMatrix]:
    dec = decompose(prob) if dec is None else dec
    bases = interval_bases(prob, dec)
    return [
        transfer_matrix(prob, bases[n - 1], bases[n], match=matching_point(prob, lo, hi))
        for n, (lo, hi) in enumerate(dec.barriers, start=1)
    ]


def _central_point(prob: ScatteringProblem) -> float:
    tp = decompose(prob).turning_points
    if not tp:
        return matching_point(prob, 0.0, 0.0)
    mid = len(tp) // 2
    return matching_point(prob, tp[mid - 1], tp[mid])


def total_transfer(prob: ScatteringProblem) -> TransferMatrix:
    """``(J_out^-, J_in^-) T = (J_in^+, J_out^+)`` from one global integration."""
    left, right = jost_basis(prob)
    return transfer_matrix(prob, left, right, match=_central_point(prob))


def coins_from_potential(prob: ScatteringProblem, dec: IntervalDecomposition | None = None) -> CoinSequence:
    """Walk coins ``U_n = m_map(T_n)``, one per barrier."""
    dec = decompose(prob) if dec is None else dec
    if dec.n0 < 1:
        raise ValueError("the potential has no barrier at this energy")
    return CoinSequence([m_map(T) for T in interval_transfer_matrices(prob, dec)])


def smatrix_qm(prob: ScatteringProblem, tol: float = TOL_QM) -> UnitaryCoin:
    """Scattering matrix from the Jost solutions by a direct solve.

    Column 1: a unit wave ``J_in^+`` from the right produces ``t J_out^-`` on the
    left and ``r J_out^+`` on the right, i.e. ``J_in^+ + r J_out^+ = t J_out^-``.
    Column 2 likewise for ``J_in^-`` from the left. All four Jost solutions
    carry the same ``lam^(-1/4)`` factor, which cancels.
    """
    left, right = jost_basis(prob)
    x = _central_point(prob)
    in_plus = right.at(prob, x)
    out_plus = in_plus.conj()
    out_minus = left.at(prob, x)
    in_minus = out_minus.conj()
    r, t = np.linalg.solve(np.column_stack([out_plus, -out_minus]), -in_plus)
    rp, tp = np.linalg.solve(np.column_stack([out_minus, -out_plus]), -in_minus)
    return UnitaryCoin(np.array([[t, rp], [r, tp]]), tol=tol)


def eta_from_state(psi: WalkState) -> NDArray[np.complex128]:
    """Coefficient pairs ``eta_n = (eta_{n,1}, eta_{n,2})``, n = 0..n0, of a walk state.

    Inverts ``Psi(n) = (eta_{n,1}, eta_{n-1,2})``, ``Psi(-inf) = eta_{0,1}``,
    ``Psi(+inf) = eta_{n0,2}``.
    """
    n0 = psi.n0
    eta = np.zeros((n0 + 1, 2), dtype=np.complex128)
    eta[0, 0] = psi.tail_minus
    eta[1:, 0] = psi.interior[:, 0]
    eta[:-1, 1] = psi.interior[:, 1]
    eta[n0, 1] = psi.tail_plus
    return eta


def delta_transfer_analytic(g: float, x0: float, lam: float, h: float) -> TransferMatrix:
    """Closed-form transfer matrix of ``g delta(x - x0)`` between plane-wave bases.

    With ``u = g / h^2`` and ``k = sqrt(lam) / h``:
    ``p = 1 - i u / (2k)``, ``q = i u e^{-2 i k x0} / (2k)``.
    """
    k = math.sqrt(lam) / h
    u = g / h**2
    p = 1.0 - 1j * u / (2 * k)
    q = 1j * u * cmath.exp(-2j * k * x0) / (2 * k)
    return TransferMatrix.from_pq(p, q)
