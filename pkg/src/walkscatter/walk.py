"""
Discrete-time two-state quantum walk on the tailed line graph [n0].

Vertices ``1..n0`` carry a coin each and a two-component amplitude
``(Psi_1(n), Psi_2(n))``: component 1 lives on the arc arriving at ``n`` from
the right (moving left), component 2 on the arc arriving from the left
(moving right). The tails ``-inf`` and ``+inf`` hold one scalar each.

One step of the evolution follows the tailed-graph rules::

    (U Psi)(-inf) = (U_1 Psi(1))_1          (U Psi)(+inf) = (U_n0 Psi(n0))_2
    (U Psi)_1(n)  = (U_{n+1} Psi(n+1))_1    (U Psi)_2(n)  = (U_{n-1} Psi(n-1))_2
    (U Psi)_2(1)  = Psi_2(1)                (U Psi)_1(n0) = Psi_1(n0)

The last two rules keep the incoming amplitudes fed from the tails constant,
so iterating ``U`` from a seed accumulates the partial sums of the path series
and converges to the scattering state (see ``path_sum``).

For the spectral analysis the graph is embedded into Z: vertex ``k`` sits at
site ``k - N0`` with ``N0 = n0 // 2 + 1``; every other site carries the
identity coin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Literal, Sequence

import numpy as np
from numpy.typing import NDArray

from .coin_algebra import UnitaryCoin, identity_coin
from .errors import DimensionMismatch, EigensolverFailure, SingularSystem

__all__ = [
    "TOL_LIN",
    "CoinSequence",
    "WalkState",
    "EMatrix",
    "TailBound",
    "step",
    "step_matrix",
    "evolve",
    "stationary_state",
    "scattering_state",
    "smatrix_stationary",
    "smatrix_boundary_states",
    "z_half_width",
    "z_coins",
    "build_e_matrix",
    "spectral_radius",
    "fit_tail_bound",
    "tail_bound",
    "pulse_evolution",
]

TOL_LIN = 1e-11

Boundary = Literal["in_minus", "out_minus", "in_plus", "out_plus"]


@dataclass(frozen=True)
class CoinSequence:
    """Ordered coins ``U_1..U_n0`` of the walk on [n0]."""

    coins: tuple[UnitaryCoin, ...]

    def __init__(self, coins: Sequence[UnitaryCoin]):
        coins = tuple(c if isinstance(c, UnitaryCoin) else UnitaryCoin(c) for c in coins)
        if not coins:
            raise ValueError("a coin sequence needs n0 >= 1 coins")
        object.__setattr__(self, "coins", coins)

    @property
    def n0(self) -> int:
        return len(self.coins)

    def __len__(self) -> int:
        return len(self.coins)

    def __getitem__(self, k: int) -> UnitaryCoin:
        """1-based access, matching vertex labels."""
        if not 1 <= k <= self.n0:
            raise IndexError(k)
        return self.coins[k - 1]

    def matrices(self) -> NDArray[np.complex128]:
        return np.stack([c.m for c in self.coins])


@dataclass
class WalkState:
    """Amplitudes on [n0] plus the two tails; ``interior[n-1] = (Psi_1(n), Psi_2(n))``."""

    interior: NDArray[np.complex128]
    tail_minus: complex = 0j
    tail_plus: complex = 0j

    def __post_init__(self) -> None:
        self.interior = np.array(self.interior, dtype=np.complex128)
        if self.interior.ndim != 2 or self.interior.shape[1] != 2:
            raise DimensionMismatch(f"interior must have shape (n0, 2), got {self.interior.shape}")
        self.tail_minus = complex(self.tail_minus)
        self.tail_plus = complex(self.tail_plus)
        if not (np.all(np.isfinite(self.interior)) and np.isfinite(self.tail_minus)
                and np.isfinite(self.tail_plus)):
            raise ValueError("walk state has non-finite amplitudes")

    @property
    def n0(self) -> int:
        return self.interior.shape[0]

    @classmethod
    def zeros(cls, n0: int) -> "WalkState":
        return cls(np.zeros((n0, 2), dtype=np.complex128))

    @classmethod
    def seed(cls, n0: int, k: int) -> "WalkState":
        """Unit amplitude entering from ``+inf`` (k=1) or from ``-inf`` (k=2)."""
        s = cls.zeros(n0)
        if k == 1:
            s.interior[n0 - 1, 0] = 1.0
        elif k == 2:
            s.interior[0, 1] = 1.0
        else:
            raise ValueError("k must be 1 or 2")
        return s

    def to_vector(self) -> NDArray[np.complex128]:
        return np.concatenate([[self.tail_minus], self.interior.ravel(), [self.tail_plus]])

    @classmethod
    def from_vector(cls, v: NDArray[np.complex128]) -> "WalkState":
        v = np.asarray(v, dtype=np.complex128)
        if v.ndim != 1 or v.size < 4 or v.size % 2:
            raise DimensionMismatch(f"state vector of size {v.size} is not 2*n0 + 2")
        return cls(v[1:-1].reshape(-1, 2), v[0], v[-1])

    def max_abs(self) -> float:
        return float(np.abs(self.to_vector()).max())


def _check(coins: CoinSequence, psi: WalkState) -> None:
    if psi.n0 != coins.n0:
        raise DimensionMismatch(f"state has {psi.n0} vertices, coins have {coins.n0}")


def step(coins: CoinSequence, psi: WalkState) -> WalkState:
    """Apply the time evolution once."""
    _check(coins, psi)
    n0 = coins.n0
    mats = coins.matrices()
    out = np.einsum("nij,nj->ni", mats, psi.interior)  # U_n Psi(n)
    new = np.empty_like(psi.interior)
    new[:-1, 0] = out[1:, 0]
    new[n0 - 1, 0] = psi.interior[n0 - 1, 0]
    new[1:, 1] = out[:-1, 1]
    new[0, 1] = psi.interior[0, 1]
    return WalkState(new, out[0, 0], out[n0 - 1, 1])


def step_matrix(coins: CoinSequence) -> NDArray[np.complex128]:
    """Dense matrix of one step acting on ``WalkState.to_vector()`` coordinates."""
    n0 = coins.n0
    dim = 2 * n0 + 2
    A = np.zeros((dim, dim), dtype=np.complex128)

    def i1(n: int) -> int:
        return 2 * n - 1

    def i2(n: int) -> int:
        return 2 * n

    for n in range(1, n0 + 1):
        u = coins[n].m
        left = 0 if n == 1 else i1(n - 1)
        right = dim - 1 if n == n0 else i2(n + 1)
        for comp, col in ((0, i1(n)), (1, i2(n))):
            A[left, col] += u[0, comp]
            A[right, col] += u[1, comp]
    A[i2(1), i2(1)] += 1.0
    A[i1(n0), i1(n0)] += 1.0
    return A


def evolve(coins: CoinSequence, psi: WalkState, L: int) -> WalkState:
    if L < 0:
        raise ValueError("L must be non-negative")
    _check(coins, psi)
    for _ in range(L):
        psi = step(coins, psi)
    return psi


def _solve_with_constraints(
    coins: CoinSequence, constraints: Sequence[tuple[int, complex]]
) -> WalkState:
    # rows 2 (Psi_2(1)) and 2*n0-1 (Psi_1(n0)) of (U - I) vanish identically;
    # they are replaced by the two scalar constraints.
    n0 = coins.n0
    dim = 2 * n0 + 2
    sys = step_matrix(coins) - np.eye(dim)
    rhs = np.zeros(dim, dtype=np.complex128)
    free_rows = (2, 2 * n0 - 1)
    for row, (idx, val) in zip(free_rows, constraints):
        sys[row, :] = 0.0
        sys[row, idx] = 1.0
        rhs[row] = val
    try:
        x = np.linalg.solve(sys, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    psi = WalkState.from_vector(x)
    resid = np.abs(step_matrix(coins) @ x - x).max()
    if not np.isfinite(resid) or resid > TOL_LIN * max(1.0, np.abs(x).max()):
        raise SingularSystem(f"stationary residual {resid:.3e} exceeds tolerance")
    return psi


def stationary_state(coins: CoinSequence, boundary: Boundary) -> WalkState:
    """Stationary state ``U Psi = Psi`` with one of the four tail normalisations.

    ============  ================================
    in_minus      Psi_2(1) = 1, Psi(-inf) = 0
    out_minus     Psi_2(1) = 0, Psi(-inf) = 1
    in_plus       Psi_1(n0) = 1, Psi(+inf) = 0
    out_plus      Psi_1(n0) = 0, Psi(+inf) = 1
    ============  ================================
    """
    n0 = coins.n0
    dim = 2 * n0 + 2
    i21, i1n, tm, tp = 2, 2 * n0 - 1, 0, dim - 1
    table = {
        "in_minus": [(i21, 1.0), (tm, 0.0)],
        "out_minus": [(i21, 0.0), (tm, 1.0)],
        "in_plus": [(i1n, 1.0), (tp, 0.0)],
        "out_plus": [(i1n, 0.0), (tp, 1.0)],
    }
    if boundary not in table:
        raise ValueError(f"unknown boundary {boundary!r}")
    return _solve_with_constraints(coins, table[boundary])


def scattering_state(coins: CoinSequence, from_plus: complex, from_minus: complex) -> WalkState:
    """Stationary state with prescribed incoming amplitudes.

    ``from_plus`` enters at vertex n0 from ``+inf``, ``from_minus`` at vertex 1
    from ``-inf``. The tails of the result hold the outgoing amplitudes.
    """
    n0 = coins.n0
    return _solve_with_constraints(coins, [(2, from_minus), (2 * n0 - 1, from_plus)])


def smatrix_stationary(coins: CoinSequence) -> UnitaryCoin:
    """Scattering matrix of the walk from its stationary scattering states.

    Column 1 holds the outgoing amplitudes ``(to -inf, to +inf)`` for a unit
    wave entering from ``+inf``; column 2 for a unit wave entering from
    ``-inf``. This equals ``star_fold(coins)``.
    """
    from_right = scattering_state(coins, 1.0, 0.0)
    from_left = scattering_state(coins, 0.0, 1.0)
    S = np.array(
        [
            [from_right.tail_minus, from_left.tail_minus],
            [from_right.tail_plus, from_left.tail_plus],
        ]
    )
    coin = UnitaryCoin(S, tol=1e-9)  # validates before the diagonal is made exact
    d = 0.5 * (S[0, 0] + S[1, 1])
    S[0, 0] = S[1, 1] = d
    return UnitaryCoin(S, tol=1e-9)


def smatrix_boundary_states(coins: CoinSequence) -> NDArray[np.complex128]:
    """Solve ``(Psi_in^+, Psi_in^-) = (Psi_out^-, Psi_out^+) S`` for ``S``.

    Uses the four normalised boundary states literally; the result is
    ``to_literal_gauge(smatrix_stationary(coins))``.
    """
    states = {b: stationary_state(coins, b).to_vector() for b in
              ("in_plus", "in_minus", "out_minus", "out_plus")}
    lhs = np.column_stack([states["out_minus"], states["out_plus"]])
    rhs = np.column_stack([states["in_plus"], states["in_minus"]])
    S, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    return S


# --- embedding into Z and the E-matrix -------------------------------------------


def z_half_width(n0: int) -> int:
    """Smallest ``N0`` whose window ``|n| <= N0 - 1`` holds all n0 coins."""
    return n0 // 2 + 1


def z_coins(coins: CoinSequence) -> dict[int, NDArray[np.complex128]]:
    """Coins keyed by Z-site for ``|site| <= N0 - 1`` (identity where unused)."""
    N0 = z_half_width(coins.n0)
    eye = identity_coin().m
    out = {}
    for site in range(-N0 + 1, N0):
        k = site + N0
        out[site] = coins[k].m if 1 <= k <= coins.n0 else eye
    return out


@dataclass(frozen=True, eq=False)
class EMatrix:
    """Walk restricted to the sites ``|n| <= N0 - 1`` of Z, as a dense matrix."""

    matrix: NDArray[np.complex128]
    N0: int

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def seed(self, k: int) -> NDArray[np.complex128]:
        """Window vector one step after a unit wave enters from ``+inf`` (k=1) or ``-inf`` (k=2)."""
        v = np.zeros(self.size, dtype=np.complex128)
        v[-2 if k == 1 else 1] = 1.0
        return v


_P = np.array([[1.0, 0.0], [0.0, 0.0]])
_Q = np.array([[0.0, 0.0], [0.0, 1.0]])


def build_e_matrix(coins: CoinSequence) -> EMatrix:
    """Block tridiagonal matrix with ``P_{n+1}`` above and ``Q_{n-1}`` below the zero diagonal."""
    N0 = z_half_width(coins.n0)
    zc = z_coins(coins)
    sites = list(range(-N0 + 1, N0))
    dim = 2 * len(sites)
    if dim != 4 * N0 - 2:
        raise DimensionMismatch("window size does not match 4*N0 - 2")
    E = np.zeros((dim, dim), dtype=np.complex128)
    for i, n in enumerate(sites):
        if n + 1 in zc:
            E[2 * i : 2 * i + 2, 2 * i + 2 : 2 * i + 4] = _P @ zc[n + 1]
        if n - 1 in zc:
            E[2 * i : 2 * i + 2, 2 * i - 2 : 2 * i] = _Q @ zc[n - 1]
    return EMatrix(E, N0)


def spectral_radius(e: EMatrix) -> float:
    try:
        ev = np.linalg.eigvals(e.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc
    if not np.all(np.isfinite(ev)):
        raise EigensolverFailure("non-finite eigenvalues")
    return float(np.abs(ev).max()) if ev.size else 0.0


@dataclass(frozen=True)
class TailBound:
    """Envelope ``C * L**k * rho**L`` dominating ``max(||E^L||, ||E^(L-1)||)``.

    ``C`` is the largest observed ratio over ``1 <= L <= horizon``; the horizon
    is extended until the ratio has dropped below half its maximum. When ``E`` is
    nilpotent the exact norms are stored instead (``rho == 0``).
    """

    C: float
    rho: float
    k: int
    horizon: int
    exact: tuple[float, ...] = field(default=(), repr=False)

    def __call__(self, L: int) -> float:
        if L < 1:
            raise ValueError("L must be a positive integer")
        if self.rho == 0.0:
            return self.exact[L] if L < len(self.exact) else 0.0
        return float(self.C * math.exp(self.k * math.log(L) + L * math.log(self.rho)))

    def tail_sum(self, L0: int) -> float:
        """Upper bound for ``sum_{L > L0} self(L)``."""
        if self.rho == 0.0:
            return float(sum(self.exact[L0 + 1 :]))
        return self.C * _power_geometric_tail(self.k, self.rho, L0)


def _eulerian(n: int) -> list[int]:
    row = [1]
    for m in range(1, n + 1):
        row = [
            (j + 1) * (row[j] if j < len(row) else 0) + (m - j) * (row[j - 1] if j >= 1 else 0)
            for j in range(m)
        ]
    return row


def _power_geometric_tail(k: int, rho: float, L0: int) -> float:
    """``sum_{L > L0} L^k rho^L`` via positive-term closed forms.

    Writing ``L = L0 + 1 + m`` and expanding the binomial leaves sums
    ``sum_m m^j rho^m = rho A_j(rho) / (1 - rho)^(j+1)`` with Eulerian
    polynomials ``A_j``; every term is positive, so there is no cancellation.
    """
    if not 0.0 <= rho < 1.0:
        return math.inf
    base = L0 + 1
    log_lead = (L0 + 1) * math.log(rho) if rho > 0 else -math.inf
    if log_lead == -math.inf:
        return 0.0
    total = 0.0
    for j in range(k + 1):
        if j == 0:
            s_j = 1.0 / (1.0 - rho)
        else:
            coeffs = _eulerian(j)
            s_j = rho * sum(c * rho**i for i, c in enumerate(coeffs)) / (1.0 - rho) ** (j + 1)
        total += math.comb(k, j) * float(base) ** (k - j) * s_j
    return math.exp(log_lead) * total


def fit_tail_bound(e: EMatrix, horizon: int = 200, max_horizon: int = 20000) -> TailBound:
    k = 2 * e.N0 - 1
    n = e.size
    Emat = e.matrix
    if n == 0 or not np.any(Emat):
        exact = (0.0, 1.0)  # ||E^0|| appears at L = 1 through the shifted envelope
        return TailBound(C=0.0, rho=0.0, k=k, horizon=1, exact=exact)
    top = np.linalg.matrix_power(Emat, n)
    if np.abs(top).max() <= 1e-14 * max(1.0, np.abs(Emat).max()) ** n:
        norms = [1.0]
        P = np.eye(n, dtype=np.complex128)
        for _ in range(n):
            P = Emat @ P
            norms.append(float(np.linalg.norm(P, 2)))
        exact = [0.0] + [max(norms[L], norms[L - 1]) for L in range(1, n + 1)]
        return TailBound(C=0.0, rho=0.0, k=k, horizon=n, exact=tuple(exact))
    rho = spectral_radius(e)
    scaled = Emat / rho
    P = np.eye(n, dtype=np.complex128)
    prev_norm = 1.0  # ||E^0|| / rho^0
    C = 0.0
    L = 0
    while True:
        L += 1
        P = scaled @ P
        cur = float(np.linalg.norm(P, 2))  # ||E^L|| / rho^L
        ratio = max(cur, prev_norm / rho) / L**k
        C = max(C, ratio)
        prev_norm = cur
        if L >= max(horizon, 4 * n) and ratio < 0.5 * C:
            break
        if L >= max_horizon:
            break
    return TailBound(C=C, rho=rho, k=k, horizon=L)


def tail_bound(e: EMatrix, L: int, horizon: int = 200) -> float:
    """``C L^(2 N0 - 1) rho^L`` bound on the walk amplitudes inside the window at time L."""
    return fit_tail_bound(e, horizon=horizon)(L)


def pulse_evolution(coins: CoinSequence, k: int) -> Iterator[dict[int, NDArray[np.complex128]]]:
    """Yield ``(U^L Psi^(k))(n)`` for ``|n| <= N0``, L = 0, 1, 2, ... on Z.

    ``Psi^(1)`` is ``(1, 0)`` at site ``N0``; ``Psi^(2)`` is ``(0, 1)`` at ``-N0``.
    Amplitude leaving the window never returns (identity coins outside).
    """
    N0 = z_half_width(coins.n0)
    zc = z_coins(coins)
    eye = np.eye(2)
    sites = range(-N0, N0 + 1)
    state = {n: np.zeros(2, dtype=np.complex128) for n in sites}
    if k == 1:
        state[N0][0] = 1.0
    elif k == 2:
        state[-N0][1] = 1.0
    else:
        raise ValueError("k must be 1 or 2")
    while True:
        yield state
        new = {n: np.zeros(2, dtype=np.complex128) for n in sites}
        for n in sites:
            out = zc.get(n, eye) @ state[n]
            if n - 1 >= -N0:
                new[n - 1][0] += out[0]
            if n + 1 <= N0:
                new[n + 1][1] += out[1]
        state = new
