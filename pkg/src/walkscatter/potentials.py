"""
Potentials built from a handful of primitives.

``PotentialSpec`` is a sum of primitive terms. Smooth terms are evaluated
pointwise; delta terms are kept apart and enter the ODE as derivative jumps.
Specs round-trip through plain records ``{"type": ..., <params>}`` so they can
be stored in JSON files and echoed verbatim into outputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Sequence, Union

import numpy as np

from .errors import ConfigError

__all__ = [
    "Gaussian",
    "Sech2",
    "ParabolaCap",
    "Delta",
    "PotentialSpec",
    "double_gaussian",
]


@dataclass(frozen=True)
class Gaussian:
    """``A exp(-((x - x0) / w)^2)``"""

    A: float
    x0: float = 0.0
    w: float = 1.0
    type: str = field(default="gaussian", init=False)

    def value(self, x):
        s = (x - self.x0) / self.w
        return self.A * np.exp(-s * s)

    def deriv(self, x):
        s = (x - self.x0) / self.w
        return -2.0 * s / self.w * self.A * np.exp(-s * s)

    def radius(self, thr: float) -> float:
        if abs(self.A) <= thr:
            return abs(self.x0)
        return abs(self.x0) + self.w * math.sqrt(math.log(abs(self.A) / thr))

    def breakpoints(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class Sech2:
    """``A sech^2((x - x0) / w)``"""

    A: float
    x0: float = 0.0
    w: float = 1.0
    type: str = field(default="sech2", init=False)

    def value(self, x):
        return self.A / np.cosh((x - self.x0) / self.w) ** 2

    def deriv(self, x):
        s = (x - self.x0) / self.w
        return -2.0 * self.A * np.tanh(s) / np.cosh(s) ** 2 / self.w

    def radius(self, thr: float) -> float:
        if 4 * abs(self.A) <= thr:
            return abs(self.x0)
        return abs(self.x0) + 0.5 * self.w * math.log(4 * abs(self.A) / thr)

    def breakpoints(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class ParabolaCap:
    """``V0 - k (x - x0)^2`` on ``|x - x0| <= half_width``, zero outside.

    ``half_width`` defaults to ``sqrt(V0 / k)``, where the cap meets zero
    continuously.
    """

    V0: float
    x0: float = 0.0
    k: float = 1.0
    half_width: float | None = None
    type: str = field(default="parabola_cap", init=False)

    def __post_init__(self) -> None:
        if self.k <= 0:
            raise ValueError("parabola_cap needs curvature k > 0")
        if self.half_width is None:
            object.__setattr__(self, "half_width", math.sqrt(max(self.V0, 0.0) / self.k))

    def value(self, x):
        s = np.asarray(x, dtype=float) - self.x0
        inside = np.abs(s) <= self.half_width
        return np.where(inside, self.V0 - self.k * s * s, 0.0)

    def deriv(self, x):
        s = np.asarray(x, dtype=float) - self.x0
        inside = np.abs(s) < self.half_width
        return np.where(inside, -2.0 * self.k * s, 0.0)

    def radius(self, thr: float) -> float:
        return abs(self.x0) + self.half_width

    def breakpoints(self) -> tuple[float, ...]:
        return (self.x0 - self.half_width, self.x0 + self.half_width)


@dataclass(frozen=True)
class Delta:
    """Point interaction ``g delta(x - x0)``."""

    g: float
    x0: float = 0.0
    type: str = field(default="delta", init=False)


Term = Union[Gaussian, Sech2, ParabolaCap, Delta]
_TYPES = {"gaussian": Gaussian, "sech2": Sech2, "parabola_cap": ParabolaCap, "delta": Delta}


@dataclass(frozen=True)
class PotentialSpec:
    """Sum of primitive terms, optionally with explicit short-range constants.

    ``decay = (C, eps)`` asserts ``|V(x)| <= C (1 + |x|)^(-1 - eps)``; when it is
    absent the truncation radius comes from the primitives' own envelopes.
    """

    terms: tuple[Term, ...] = ()
    decay: tuple[float, float] | None = None

    def __init__(self, terms: Iterable[Term] = (), decay: Sequence[float] | None = None):
        object.__setattr__(self, "terms", tuple(terms))
        object.__setattr__(self, "decay", None if decay is None else (float(decay[0]), float(decay[1])))

    @property
    def smooth_terms(self) -> tuple[Term, ...]:
        return tuple(t for t in self.terms if not isinstance(t, Delta))

    @property
    def deltas(self) -> tuple[Delta, ...]:
        return tuple(sorted((t for t in self.terms if isinstance(t, Delta)), key=lambda d: d.x0))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for t in self.smooth_terms:
            out = out + t.value(x)
        return out if out.ndim else float(out)

    def deriv(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for t in self.smooth_terms:
            out = out + t.deriv(x)
        return out if out.ndim else float(out)

    def breakpoints(self) -> tuple[float, ...]:
        pts = {p for t in self.smooth_terms for p in t.breakpoints()}
        return tuple(sorted(pts))

    def truncation_radius(self, threshold: float, cap: float = 1e3) -> float:
        """Radius beyond which ``|V| < threshold``."""
        if self.decay is not None:
            C, eps = self.decay
            r = (C / threshold) ** (1.0 / (1.0 + eps)) - 1.0
        else:
            r = 0.0
            for t in self.smooth_terms:
                r = max(r, t.radius(threshold / max(1, len(self.smooth_terms))))
        for d in self.deltas:
            r = max(r, abs(d.x0))
        return float(min(max(r, 1.0), cap))

    def check_short_range(self, x_inf: float, n: int = 2001) -> bool:
        """Check the declared decay bound on a grid over ``[-x_inf, x_inf]``."""
        if self.decay is None:
            return True
        C, eps = self.decay
        x = np.linspace(-x_inf, x_inf, n)
        return bool(np.all(np.abs(self(x)) <= C * (1 + np.abs(x)) ** (-1 - eps) * (1 + 1e-12)))

    # --- serialisation -----------------------------------------------------------

    def to_records(self) -> list[dict[str, Any]]:
        recs = []
        for t in self.terms:
            d = asdict(t)
            typ = d.pop("type")
            recs.append({"type": typ, **d})
        return recs

    def to_json(self) -> str:
        payload: dict[str, Any] = {"terms": self.to_records()}
        if self.decay is not None:
            payload["decay"] = list(self.decay)
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_records(cls, records: Iterable[dict[str, Any]], decay=None) -> "PotentialSpec":
        terms = []
        for rec in records:
            rec = dict(rec)
            typ = rec.pop("type", None)
            if typ not in _TYPES:
                raise ConfigError(f"potential term type {typ!r} is not one of {sorted(_TYPES)}")
            try:
                terms.append(_TYPES[typ](**rec))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad parameters for {typ} term: {exc}") from exc
        return cls(terms, decay)

    @classmethod
    def from_json(cls, text: str) -> "PotentialSpec":
        obj = json.loads(text)
        if isinstance(obj, list):
            return cls.from_records(obj)
        return cls.from_records(obj.get("terms", []), obj.get("decay"))


def double_gaussian(A: float = 1.0, d: float = 1.5, w: float = 0.5) -> PotentialSpec:
    """Two equal Gaussian bumps at ``+-d``."""
    return PotentialSpec([Gaussian(A, -d, w), Gaussian(A, d, w)])
