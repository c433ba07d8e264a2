"""Quantum walks on barrier chains and 1D Schrodinger scattering.

The scattering matrix of ``-h^2 phi'' + V phi = lam phi`` is computed three ways:
directly from Jost solutions, from the stationary states of a quantum walk
whose coins are the local scattering matrices of the barriers, and as a sum
of walker path amplitudes.
"""

from .coin_algebra import (
    TransferMatrix,
    UnitaryCoin,
    hadamard_coin,
    identity_coin,
    m_inverse,
    m_map,
    star,
    star_fold,
)
from .potentials import Delta, Gaussian, ParabolaCap, PotentialSpec, Sech2, double_gaussian
from .walk import CoinSequence, WalkState, smatrix_stationary, step
from .path_sum import smatrix_series
from .schrodinger import ScatteringProblem, coins_from_potential, decompose, smatrix_qm
from .barrier_top import hadamard_deviation, penetration_factor, principal_coins

__version__ = "0.1.0"

__all__ = [
    "TransferMatrix",
    "UnitaryCoin",
    "hadamard_coin",
    "identity_coin",
    "m_inverse",
    "m_map",
    "star",
    "star_fold",
    "Delta",
    "Gaussian",
    "ParabolaCap",
    "PotentialSpec",
    "Sech2",
    "double_gaussian",
    "CoinSequence",
    "WalkState",
    "smatrix_stationary",
    "step",
    "smatrix_series",
    "ScatteringProblem",
    "coins_from_potential",
    "decompose",
    "smatrix_qm",
    "hadamard_deviation",
    "penetration_factor",
    "principal_coins",
]
