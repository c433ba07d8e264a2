"""Run configuration for the command-line front end.

Config files are JSON objects mirroring :class:`RunConfig`. A problem is given
either as a potential::

    {"mode": "smatrix",
     "potential": {"terms": [{"type": "gaussian", "A": 1.0, "x0": -1.5, "w": 0.5},
                             {"type": "gaussian", "A": 1.0, "x0": 1.5, "w": 0.5}]},
     "lambda_grid": [0.8, 0.9], "h_grid": [0.05]}

or as an explicit coin list, each coin being ``"hadamard"``, ``"identity"`` or
``{"re": [[..], [..]], "im": [[..], [..]]}``::

    {"mode": "spectrum", "coins": ["hadamard", "hadamard"]}
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .coin_algebra import UnitaryCoin, hadamard_coin, identity_coin
from .errors import ConfigError, WalkScatterError
from .potentials import PotentialSpec
from .walk import CoinSequence

__all__ = ["MODES", "RunConfig", "load_config", "parse_coin"]

MODES = ("coins", "evolve", "smatrix", "paths", "barriertop", "spectrum")


def parse_coin(obj: Any) -> UnitaryCoin:
    if obj == "hadamard":
        return hadamard_coin()
    if obj == "identity":
        return identity_coin()
    if isinstance(obj, dict) and "re" in obj:
        m = np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj.get("im", [[0, 0], [0, 0]]), dtype=float)
        return UnitaryCoin(m)
    raise ConfigError(f"coins: cannot interpret {obj!r} as a coin")


def _coin_record(c: UnitaryCoin) -> dict[str, Any]:
    return {"re": c.m.real.tolist(), "im": c.m.imag.tolist()}


@dataclass
class RunConfig:
    """Fully resolved run description.

    ``steps`` is the walk length for ``evolve`` and ``paths``; ``max_L`` caps the
    path series in ``smatrix``.
    """

    mode: str
    potential: PotentialSpec | None = None
    coins: CoinSequence | None = None
    lambda_grid: list[float] = field(default_factory=list)
    h_grid: list[float] = field(default_factory=list)
    tol: float = 1e-10
    ode_tol: float = 1e-10
    max_L: int = 100_000
    steps: int = 30
    side: int = 1
    x_inf: float | None = None
    C0: float = 1.0
    M_exp: float = 2.0
    seed: int = 0
    workers: int = 1
    out: str = "out"

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode: {self.mode!r} is not one of {MODES}")
        if (self.potential is None) == (self.coins is None):
            raise ConfigError("potential/coins: give exactly one of a potential or an explicit coin list")
        if self.potential is not None:
            if not self.lambda_grid:
                raise ConfigError("lambda_grid: must be a nonempty list")
            if not self.h_grid:
                raise ConfigError("h_grid: must be a nonempty list")
            if any(not (lam > 0) for lam in self.lambda_grid):
                raise ConfigError("lambda_grid: energies must be positive")
            if any(not (h > 0) for h in self.h_grid):
                raise ConfigError("h_grid: values must be positive")
        elif self.mode == "barriertop":
            raise ConfigError("mode: barriertop needs a potential, not explicit coins")
        if not self.tol > 0:
            raise ConfigError("tol: must be positive")
        if not self.ode_tol > 0:
            raise ConfigError("ode_tol: must be positive")
        if self.max_L < 1:
            raise ConfigError("max_L: must be a positive integer")
        if self.steps < 1:
            raise ConfigError("steps: must be a positive integer")
        if self.side not in (1, 2):
            raise ConfigError("side: must be 1 (enter from +inf) or 2 (enter from -inf)")
        if self.workers < 1:
            raise ConfigError("workers: must be at least 1")

    # --- (de)serialisation --------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if f.name == "potential":
                v = None if v is None else json.loads(v.to_json())
            elif f.name == "coins":
                v = None if v is None else [_coin_record(c) for c in v.coins]
            d[f.name] = v
        return d

    def echo(self) -> str:
        """Canonical one-line JSON of the resolved config."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config: top level must be a JSON object")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - names)
        if unknown:
            raise ConfigError(f"{unknown[0]}: unknown config field")
        if "mode" not in raw:
            raise ConfigError("mode: missing")
        kw = dict(raw)
        try:
            if kw.get("potential") is not None:
                pot = kw["potential"]
                kw["potential"] = PotentialSpec.from_json(json.dumps(pot))
            if kw.get("coins") is not None:
                kw["coins"] = CoinSequence([parse_coin(c) for c in kw["coins"]])
        except ConfigError:
            raise
        except (WalkScatterError, ValueError, TypeError) as exc:
            name = "potential" if "potential" in raw and raw["potential"] is not None else "coins"
            raise ConfigError(f"{name}: {exc}") from exc
        for name in ("lambda_grid", "h_grid"):
            if name in kw:
                if not isinstance(kw[name], list):
                    raise ConfigError(f"{name}: must be an explicit list")
                try:
                    kw[name] = [float(v) for v in kw[name]]
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"{name}: {exc}") from exc
        for name, typ in (("tol", float), ("ode_tol", float), ("C0", float), ("M_exp", float),
                          ("max_L", int), ("steps", int), ("side", int), ("seed", int), ("workers", int)):
            if name in kw:
                try:
                    kw[name] = typ(kw[name])
                except (TypeError, ValueError) as exc:
                    raise ConfigError(f"{name}: {exc}") from exc
        return cls(**kw)


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON ({exc})") from exc
    return RunConfig.from_dict(raw)
