"""
Complex log-Gamma via the Lanczos approximation (g = 7, 9 terms).

For ``Re z < 1/2`` the reflection formula ``Gamma(z) Gamma(1 - z) = pi / sin(pi z)``
is applied, with ``log sin`` evaluated in an overflow-free form so that large
imaginary parts (``|Im z|`` up to ~1e4 and beyond) stay accurate.
"""

from __future__ import annotations

import cmath
import math

__all__ = ["loggamma", "gamma", "log_sin_pi"]

_G = 7.0
_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def log_sin_pi(z: complex) -> complex:
    """``log(sin(pi z))`` continuous in ``Im z`` (branch fixed up to 2 pi i).

    Uses ``sin(pi z) = (e^{i pi z} - e^{-i pi z}) / (2i)`` with the dominant
    exponential factored out.
    """
    z = complex(z)
    if z.imag >= 0:
        # |e^{-i pi z}| = e^{pi Im z} dominates
        w = cmath.exp(2j * math.pi * z)  # small
        return -1j * math.pi * z + cmath.log(1.0 - w) - cmath.log(-2j)
    w = cmath.exp(-2j * math.pi * z)
    return 1j * math.pi * z + cmath.log(1.0 - w) - cmath.log(2j)


def loggamma(z: complex) -> complex:
    """``log Gamma(z)``; equals the principal ``loggamma`` modulo ``2 pi i``.

    Accurate to ~1e-14 relative in ``Gamma`` for moderate arguments. Poles
    (non-positive integers) raise ``ZeroDivisionError``.
    """
    z = complex(z)
    if z.real < 0.5:
        if z.imag == 0 and z.real == math.floor(z.real):
            raise ZeroDivisionError(f"Gamma has a pole at {z.real:g}")
        return math.log(math.pi) - log_sin_pi(z) - loggamma(1.0 - z)
    z -= 1.0
    x = _COEF[0]
    for i in range(1, len(_COEF)):
        x += _COEF[i] / (z + i)
    t = z + _G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def gamma(z: complex) -> complex:
    return cmath.exp(loggamma(z))
