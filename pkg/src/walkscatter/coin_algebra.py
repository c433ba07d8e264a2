"""
2x2 matrix algebra for transfer matrices and unitary coins.

Two refined subsets of 2x2 complex matrices are used throughout:

- ``TransferMatrix``: ``[[p, conj(q)], [q, conj(p)]]`` with ``|p|^2 - |q|^2 = 1``.
  These change the basis of solutions between neighbouring intervals.
- ``UnitaryCoin``: unitary ``[[a, b], [c, a]]`` with ``a != 0``.
  These are local scattering matrices and the coins of the walk.

``m_map`` is the bijection between the two sets and ``star`` is the group
operation it induces on coins.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DegenerateCoin, InvalidCoin, InvalidTransfer

__all__ = [
    "TOL_ALG",
    "TransferMatrix",
    "UnitaryCoin",
    "as_mat2",
    "m_map",
    "m_inverse",
    "star",
    "star_fold",
    "identity_coin",
    "hadamard_coin",
    "random_transfer",
    "random_coin",
    "SIGN_GAUGE",
    "to_literal_gauge",
]

TOL_ALG = 1e-10

# diag(1, -1): conjugating by it flips the off-diagonal signs of a 2x2 matrix.
SIGN_GAUGE = np.diag([1.0, -1.0]).astype(np.complex128)


def as_mat2(m: ArrayLike) -> NDArray[np.complex128]:
    """Return a read-only complex 2x2 copy of ``m``; raise on bad shape or non-finite entries."""
    arr = np.array(m, dtype=np.complex128)
    if arr.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    arr.setflags(write=False)
    return arr


def _frozen(arr: NDArray[np.complex128]) -> NDArray[np.complex128]:
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Element of the group of conjugate-symmetric SL(2, C) matrices.

    Construction validates membership; use ``TransferMatrix.from_pq`` to build
    an exact member from its first column.
    """

    m: NDArray[np.complex128]
    tol: float = field(default=TOL_ALG, repr=False)

    def __post_init__(self) -> None:
        try:
            m = as_mat2(self.m)
        except ValueError as exc:
            raise InvalidTransfer(str(exc)) from exc
        object.__setattr__(self, "m", m)
        scale = max(1.0, float(np.abs(m).max()))
        if abs(m[1, 1] - np.conj(m[0, 0])) > self.tol * scale or abs(
            m[0, 1] - np.conj(m[1, 0])
        ) > self.tol * scale:
            raise InvalidTransfer("entries are not conjugate-symmetric")
        det = abs(m[0, 0]) ** 2 - abs(m[1, 0]) ** 2
        if abs(det - 1.0) > self.tol * scale**2:
            raise InvalidTransfer(f"|p|^2 - |q|^2 = {det!r}, expected 1")

    @classmethod
    def from_pq(cls, p: complex, q: complex, tol: float = TOL_ALG) -> "TransferMatrix":
        return cls(np.array([[p, np.conj(q)], [q, np.conj(p)]]), tol=tol)

    @property
    def p(self) -> complex:
        return complex(self.m[0, 0])

    @property
    def q(self) -> complex:
        return complex(self.m[1, 0])

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        return TransferMatrix(self.m @ other.m, tol=max(self.tol, other.tol))

    def __repr__(self) -> str:
        return f"TransferMatrix(p={self.p:.6g}, q={self.q:.6g})"


@dataclass(frozen=True, eq=False)
class UnitaryCoin:
    """Unitary 2x2 matrix with equal, non-vanishing diagonal entries."""

    m: NDArray[np.complex128]
    tol: float = field(default=TOL_ALG, repr=False)

    def __post_init__(self) -> None:
        try:
            m = as_mat2(self.m)
        except ValueError as exc:
            raise InvalidCoin(str(exc)) from exc
        object.__setattr__(self, "m", m)
        if np.abs(m @ m.conj().T - np.eye(2)).max() > self.tol:
            raise InvalidCoin("matrix is not unitary")
        if abs(m[0, 0] - m[1, 1]) > self.tol:
            raise InvalidCoin("diagonal entries differ")
        # the degeneracy threshold is fixed: ``tol`` may be relaxed for ill-conditioned
        # products, but a small transmission amplitude is still a valid coin
        if abs(m[0, 0]) <= TOL_ALG:
            raise DegenerateCoin("diagonal entry vanishes (perfect reflection)")

    @property
    def a(self) -> complex:
        return complex(self.m[0, 0])

    @property
    def b(self) -> complex:
        return complex(self.m[0, 1])

    @property
    def c(self) -> complex:
        return complex(self.m[1, 0])

    def __repr__(self) -> str:
        return f"UnitaryCoin(a={self.a:.6g}, b={self.b:.6g}, c={self.c:.6g})"


def m_map(t: TransferMatrix) -> UnitaryCoin:
    """Map a transfer matrix to its local scattering matrix.

    ``[[p, conj(q)], [q, conj(p)]]  ->  (1/conj(p)) [[1, conj(q)], [-q, 1]]``
    """
    if not isinstance(t, TransferMatrix):
        t = TransferMatrix(t)
    p, q = t.p, t.q
    pc = np.conj(p)
    out = np.array([[1.0, np.conj(q)], [-q, 1.0]], dtype=np.complex128) / pc
    return UnitaryCoin(out, tol=t.tol)


def m_inverse(s: UnitaryCoin) -> TransferMatrix:
    """Inverse of ``m_map``: ``[[a, b], [c, a]] -> [[1/conj(a), b/a], [conj(b)/conj(a), 1/a]]``."""
    if not isinstance(s, UnitaryCoin):
        s = UnitaryCoin(s)
    a, b = s.a, s.b
    ac = np.conj(a)
    out = np.array([[1.0 / ac, b / a], [np.conj(b) / ac, 1.0 / a]], dtype=np.complex128)
    return TransferMatrix(out, tol=_inverse_tol(s))


def _inverse_tol(s: UnitaryCoin) -> float:
    # entries of the preimage scale like 1/|a|; relax the check proportionally
    return s.tol / min(1.0, abs(s.a)) ** 2


def star(s1: UnitaryCoin, s2: UnitaryCoin) -> UnitaryCoin:
    """Group product of two coins, ``M(M^-1(s1) M^-1(s2))``."""
    t1, t2 = m_inverse(s1), m_inverse(s2)
    prod = TransferMatrix(t1.m @ t2.m, tol=_product_tol(t1, t2))
    return m_map(prod)


def _product_tol(*ts: TransferMatrix) -> float:
    scale = 1.0
    for t in ts:
        scale *= max(1.0, float(np.abs(t.m).max()))
    return TOL_ALG * scale


def star_fold(coins: Sequence[UnitaryCoin]) -> UnitaryCoin:
    """Left fold of ``star`` over a non-empty coin list."""
    coins = list(coins)
    if not coins:
        raise ValueError("star_fold needs at least one coin")
    return reduce(star, coins)


def identity_coin() -> UnitaryCoin:
    return UnitaryCoin(np.eye(2))


def hadamard_coin() -> UnitaryCoin:
    """The Hadamard-type coin ``(1/sqrt 2) [[1, 1], [-1, 1]]`` (equal diagonals)."""
    return UnitaryCoin(np.array([[1.0, 1.0], [-1.0, 1.0]]) / np.sqrt(2.0))


def random_transfer(rng: np.random.Generator, qmax: float = 10.0) -> TransferMatrix:
    """Random transfer matrix with ``|q| <= qmax`` and uniform phases."""
    r = qmax * np.sqrt(rng.uniform())
    q = r * np.exp(2j * np.pi * rng.uniform())
    p = np.sqrt(1.0 + r * r) * np.exp(2j * np.pi * rng.uniform())
    return TransferMatrix.from_pq(p, q)


def random_coin(rng: np.random.Generator, amin: float = 0.05) -> UnitaryCoin:
    """Random coin ``e^{i phi} [[alpha, beta], [-conj(beta), alpha]]`` with ``alpha >= amin``."""
    alpha = rng.uniform(amin, 1.0)
    beta = np.sqrt(1.0 - alpha**2) * np.exp(2j * np.pi * rng.uniform())
    phase = np.exp(2j * np.pi * rng.uniform())
    m = phase * np.array([[alpha, beta], [-np.conj(beta), alpha]])
    return UnitaryCoin(m)


def to_literal_gauge(s: ArrayLike) -> NDArray[np.complex128]:
    """Flip the off-diagonal signs of a scattering matrix.

    Scattering matrices in this package map incoming amplitudes to outgoing
    amplitudes. Assembling them instead from the four normalised boundary
    states (in/out at each tail) produces ``D S D`` with ``D = diag(1, -1)``;
    this helper converts between the two.
    """
    m = np.asarray(getattr(s, "m", s), dtype=np.complex128)
    return SIGN_GAUGE @ m @ SIGN_GAUGE


def coins_from_arrays(arrays: Iterable[ArrayLike]) -> list[UnitaryCoin]:
    return [UnitaryCoin(a) for a in arrays]
