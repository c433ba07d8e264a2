"""
Feynman path sums over walker trajectories on the tailed graph [n0].

Arcs are ``(n, "L")`` = (n+1 -> n) and ``(n, "R")`` = (n-1 -> n). Vertex 0 stands
for the tail ``-inf`` and vertex ``n0 + 1`` for ``+inf``. A walk entering from
``+inf`` starts on ``(n0, "L")``; one entering from ``-inf`` starts on
``(1, "R")``. Walks end on the absorbing arcs ``(0, "L")`` (exit to ``-inf``) or
``(n0 + 1, "R")`` (exit to ``+inf``).

The amplitude of a walk multiplies one coin entry per transition, taken from
the coin at the vertex being left:

====================  =====================  ======
previous arc          next arc               factor
====================  =====================  ======
(n, L)                (n-1, L)               a_n
(n, R)                (n-1, L)               b_n
(n, L)                (n+1, R)               c_n
(n, R)                (n+1, R)               a_n
====================  =====================  ======

Entry ``s_jk`` of the scattering matrix (j = exit side, k = entry side, 1 for
``-inf`` exits / ``+inf`` entries) is the sum over all such walks, taken layer by
layer in the walk length.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .coin_algebra import UnitaryCoin
from .errors import EnumerationCapExceeded, NonConsecutivePath, SlowConvergence
from .walk import CoinSequence, WalkState, build_e_matrix, fit_tail_bound, step

__all__ = [
    "Arc",
    "WalkPath",
    "SeriesResult",
    "L_ENUM_MAX",
    "L_SERIES_MAX",
    "amplitude",
    "enumerate_paths",
    "layer_counts",
    "partial_sum",
    "layers",
    "smatrix_series",
    "series_matrix",
    "layers_csv",
]

L_ENUM_MAX = 24
L_SERIES_MAX = 100_000


@dataclass(frozen=True, order=True)
class Arc:
    vertex: int
    direction: str  # "L" or "R"

    def __post_init__(self) -> None:
        if self.direction not in ("L", "R"):
            raise ValueError(f"direction must be 'L' or 'R', got {self.direction!r}")

    @property
    def origin(self) -> int:
        return self.vertex + 1 if self.direction == "L" else self.vertex - 1

    @property
    def terminus(self) -> int:
        return self.vertex


@dataclass(frozen=True)
class WalkPath:
    arcs: tuple[Arc, ...]

    def __post_init__(self) -> None:
        for prev, nxt in zip(self.arcs, self.arcs[1:]):
            if nxt.origin != prev.terminus:
                raise NonConsecutivePath(f"{prev} is not followed consecutively by {nxt}")

    @property
    def length(self) -> int:
        return len(self.arcs) - 1


def _entry(coin: UnitaryCoin, prev: str, nxt: str) -> complex:
    if prev == nxt:
        return coin.a
    return coin.b if prev == "R" else coin.c


def amplitude(coins: CoinSequence, path: WalkPath) -> complex:
    """Product of coin entries along ``path``; identity coins off [n0]."""
    if not isinstance(path, WalkPath):
        path = WalkPath(tuple(path))
    amp = 1.0 + 0j
    for prev, nxt in zip(path.arcs, path.arcs[1:]):
        if nxt.origin != prev.terminus:
            raise NonConsecutivePath(f"{prev} -> {nxt}")
        v = nxt.origin
        if 1 <= v <= coins.n0:
            amp *= _entry(coins[v], prev.direction, nxt.direction)
        elif prev.direction != nxt.direction:
            return 0j
    return amp


def _start_arc(n0: int, k: int) -> Arc:
    return Arc(n0, "L") if k == 1 else Arc(1, "R")


def _end_arc(n0: int, j: int) -> Arc:
    return Arc(0, "L") if j == 1 else Arc(n0 + 1, "R")


def enumerate_paths(
    coins: CoinSequence, j: int, k: int, L: int, cap: int = L_ENUM_MAX
) -> list[WalkPath]:
    """All walks of length ``L`` entering on side ``k`` and exiting on side ``j``.

    Depth-first, pruning branches that can no longer reach the exit within the
    remaining steps (distance memoised per arc). Only for cross-checks at small L.
    """
    if L > cap:
        raise EnumerationCapExceeded(f"L={L} exceeds enumeration cap {cap}")
    if L < 1:
        return []
    n0 = coins.n0
    start, end = _start_arc(n0, k), _end_arc(n0, j)

    def min_steps(arc: Arc) -> int:
        # fewest transitions from arc to the exit arc; a turn costs no extra step
        if arc == end:
            return 0
        v = arc.vertex
        return v if j == 1 else n0 + 1 - v

    found: list[WalkPath] = []
    trail = [start]

    def dfs(arc: Arc, remaining: int) -> None:
        if remaining == 0:
            if arc == end:
                found.append(WalkPath(tuple(trail)))
            return
        if arc.vertex in (0, n0 + 1) or min_steps(arc) > remaining:
            return
        v = arc.vertex
        for nxt in (Arc(v - 1, "L"), Arc(v + 1, "R")):
            trail.append(nxt)
            dfs(nxt, remaining - 1)
            trail.pop()

    dfs(start, L)
    return found


def layer_counts(coins: CoinSequence, j: int, k: int, L_max: int) -> list[int]:
    """Number of walks at each length ``1..L_max`` (index 0 unused)."""
    return [0] + [len(enumerate_paths(coins, j, k, L)) for L in range(1, L_max + 1)]


def _exit(state: WalkState, j: int) -> complex:
    return state.tail_minus if j == 1 else state.tail_plus


def layers(coins: CoinSequence, k: int) -> Iterator[tuple[complex, complex]]:
    """Yield ``(layer to -inf, layer to +inf)`` for walk lengths 1, 2, ...

    Uses powers of the tailed-graph evolution: the source rule keeps the seed
    alive, so the tails of ``U^L Psi`` hold cumulative sums and successive
    differences give individual layers.
    """
    psi = WalkState.seed(coins.n0, k)
    prev = (0j, 0j)
    while True:
        psi = step(coins, psi)
        cur = (psi.tail_minus, psi.tail_plus)
        yield cur[0] - prev[0], cur[1] - prev[1]
        prev = cur


def partial_sum(coins: CoinSequence, j: int, k: int, L: int) -> complex:
    """Sum of the amplitudes of all walks of length ``L`` from side ``k`` to side ``j``."""
    if L < 1:
        raise ValueError("L must be positive")
    for idx, lay in enumerate(layers(coins, k), start=1):
        if idx == L:
            return lay[j - 1]
    raise AssertionError("unreachable")


@dataclass
class SeriesResult:
    value: complex
    truncation_L: int
    error_bound: float
    per_length_partial_sums: list[complex] = field(default_factory=list, repr=False)
    bounds: list[float] = field(default_factory=list, repr=False)

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.per_length_partial_sums)


def smatrix_series(
    coins: CoinSequence, tol: float = 1e-10, max_L: int = L_SERIES_MAX, keep_layers: bool = True
) -> list[list[SeriesResult]]:
    """Sum the path series for every entry of the scattering matrix.

    Layers are added in order of walk length until the certified remainder
    ``sum_{L' > L} C L'^(2 N0 - 1) rho^L'`` drops below ``tol``.

    Returns
    -------
    list[list[SeriesResult]]
        ``out[j-1][k-1]`` holds entry ``s_jk``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    bound = fit_tail_bound(build_e_matrix(coins))
    lo, L_stop = 0, 1
    while bound.tail_sum(L_stop) >= tol:
        if L_stop >= max_L:
            raise SlowConvergence(
                f"remainder bound still above {tol:g} at L={max_L} (rho_E={bound.rho:.6f})"
            )
        lo, L_stop = L_stop, min(max_L, 2 * L_stop)
    # smallest L with a small enough remainder (the bound's tail sum is monotone)
    while L_stop - lo > 1:
        mid = (lo + L_stop) // 2
        if bound.tail_sum(mid) < tol:
            L_stop = mid
        else:
            lo = mid
    err = bound.tail_sum(L_stop)
    out: list[list[SeriesResult]] = [[None, None], [None, None]]  # type: ignore[list-item]
    for k in (1, 2):
        acc = [0j, 0j]
        seq: list[list[complex]] = [[], []]
        for L, lay in enumerate(layers(coins, k), start=1):
            for jj in (0, 1):
                acc[jj] += lay[jj]
                if keep_layers:
                    seq[jj].append(lay[jj])
            if L >= L_stop:
                break
        for jj in (0, 1):
            out[jj][k - 1] = SeriesResult(
                value=acc[jj],
                truncation_L=L_stop,
                error_bound=err,
                per_length_partial_sums=seq[jj],
                bounds=[bound(L) for L in range(1, L_stop + 1)] if keep_layers else [],
            )
    return out


def series_matrix(results: Sequence[Sequence[SeriesResult]]) -> np.ndarray:
    return np.array([[results[j][k].value for k in (0, 1)] for j in (0, 1)])


def layers_csv(coins: CoinSequence, j: int, k: int, L_max: int, count_cap: int = 14) -> str:
    """CSV text: ``L, count, layer_real, layer_imag, cumulative_real, cumulative_imag, bound``.

    ``count`` is filled by enumeration for ``L <= count_cap`` and left empty above.
    """
    bound = fit_tail_bound(build_e_matrix(coins))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["L", "count", "layer_real", "layer_imag", "cumulative_real", "cumulative_imag", "bound"])
    cum = 0j
    for L, lay in enumerate(layers(coins, k), start=1):
        val = lay[j - 1]
        cum += val
        count = len(enumerate_paths(coins, j, k, L, cap=max(count_cap, L_ENUM_MAX))) if L <= count_cap else ""
        w.writerow([L, count, repr(val.real), repr(val.imag), repr(cum.real), repr(cum.imag), repr(bound(L))])
        if L >= L_max:
            break
    return buf.getvalue()
