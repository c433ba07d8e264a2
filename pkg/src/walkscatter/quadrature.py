"""
Quadrature of square-root integrands that vanish at turning points.

Near an endpoint ``e`` where the radicand vanishes linearly, the substitution
``x = e +- t^2`` turns ``sqrt(x - e)`` behaviour into a smooth integrand in
``t``. The substituted pieces go to adaptive Gauss-Kronrod (QUADPACK).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import QuadratureFailure

__all__ = ["QUAD_TOL", "turning_point_integral", "tail_integral", "gauss_legendre"]

QUAD_TOL = 1e-12


def _quad(f: Callable[[float], float], a: float, b: float, tol: float, points=None) -> tuple[float, float]:
    kw = dict(epsabs=tol, epsrel=tol, limit=800)
    if points:
        pts = [p for p in points if a < p < b]
        if pts:
            kw["points"] = pts
    with np.errstate(all="ignore"):
        res = integrate.quad(f, a, b, full_output=1, **kw)
    val, err = res[0], res[1]
    # a fourth element is QUADPACK's warning message
    if len(res) > 3 and not err <= 10 * tol * max(1.0, abs(val)):
        raise QuadratureFailure(f"quad did not converge on [{a}, {b}]: {res[3]}")
    if not math.isfinite(val):
        raise QuadratureFailure(f"non-finite integral on [{a}, {b}]")
    return val, err


def turning_point_integral(
    f: Callable[[float], float],
    a: float,
    b: float,
    sing_left: bool = True,
    sing_right: bool = True,
    tol: float = QUAD_TOL,
    breakpoints: Sequence[float] = (),
) -> tuple[float, float]:
    """Integrate ``f`` over ``[a, b]`` where ``f`` may behave like ``sqrt`` at either end.

    Returns ``(value, error_estimate)``.
    """
    if b < a:
        v, e = turning_point_integral(f, b, a, sing_right, sing_left, tol, breakpoints)
        return -v, e
    if b == a:
        return 0.0, 0.0
    inner = sorted(p for p in breakpoints if a < p < b)
    # substituted end pieces stop at the first/last breakpoint so they stay smooth
    if inner:
        left_end, right_end = inner[0], inner[-1]
    elif sing_left and sing_right:
        left_end = right_end = 0.5 * (a + b)
    else:
        left_end, right_end = b, a
    total, err = 0.0, 0.0

    if sing_left:
        tmax = math.sqrt(left_end - a)
        v, e = _quad(lambda t: f(a + t * t) * 2.0 * t, 0.0, tmax, tol)
        total += v
        err += e
        lo = left_end
    else:
        lo = a
    if sing_right:
        tmax = math.sqrt(b - right_end)
        v, e = _quad(lambda t: f(b - t * t) * 2.0 * t, 0.0, tmax, tol)
        total += v
        err += e
        hi = right_end
    else:
        hi = b
    if hi > lo:
        v, e = _quad(f, lo, hi, tol, points=inner)
        total += v
        err += e
    return total, err


def tail_integral(f: Callable[[float], float], a: float, direction: int, tol: float = QUAD_TOL) -> tuple[float, float]:
    """``int_a^{+inf} f`` (direction=+1) or ``int_{-inf}^a f`` (direction=-1)."""
    if direction > 0:
        return _quad(f, a, math.inf, tol)
    return _quad(f, -math.inf, a, tol)


def gauss_legendre(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, panels: int = 64, order: int = 20) -> float:
    """Composite Gauss-Legendre rule with vectorised ``f``."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return float(np.dot(weights, f(nodes)))
