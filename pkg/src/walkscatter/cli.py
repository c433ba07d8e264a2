"""
Command-line front end.

    walkscatter --config run.json [--mode smatrix] [--out DIR] [--tol X] [--max-L N] [--workers K]

Writes ``DIR/<mode>.csv``. The first line of every file is ``# config: <json>``
with the fully resolved configuration; the second is the fixed header. Complex
numbers appear as ``*_re`` / ``*_im`` column pairs and floats are written with
``repr`` so files are byte-identical across runs.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import barrier_top as bt
from .coin_algebra import UnitaryCoin, identity_coin, star_fold
from .config import RunConfig, load_config
from .errors import ConfigError, WalkScatterError
from .path_sum import L_ENUM_MAX, enumerate_paths, layers, series_matrix, smatrix_series
from .schrodinger import ScatteringProblem, coins_from_potential, decompose, smatrix_qm
from .walk import CoinSequence, WalkState, build_e_matrix, fit_tail_bound, smatrix_stationary, step

__all__ = ["main", "run", "HEADERS"]

_ENTRIES = ("11", "12", "21", "22")
_COMPLEX_COLS = [f"{p}{e}_{part}" for p in ("s",) for e in _ENTRIES for part in ("re", "im")]

HEADERS: dict[str, list[str]] = {
    "coins": ["lam", "h", "n"] + [f"U{e}_{part}" for e in _ENTRIES for part in ("re", "im")],
    "evolve": ["lam", "h", "step", "position", "component", "re", "im"],
    "smatrix": ["lam", "h", "route"] + _COMPLEX_COLS + ["max_pairwise_deviation"],
    "paths": ["lam", "h", "j", "k", "L", "count", "layer_re", "layer_im", "cumulative_re", "cumulative_im", "bound"],
    "barriertop": ["lam", "h", "n", "B_n", "S_n", "S_minus", "S_plus", "abs_N_plus", "abs_N_minus",
                   "hadamard_deviation", "U11_sq", "U12_sq", "U21_sq", "U22_sq"],
    "spectrum": ["lam", "h", "kind", "index", "re", "im", "abs"],
}

PATH_COUNT_MAX = 14


def _f(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _cplx(z: complex) -> list[str]:
    return [_f(float(np.real(z))), _f(float(np.imag(z)))]


@dataclasses.dataclass
class _Point:
    lam: float | None
    h: float | None
    coins: CoinSequence | None  # None: no barrier at this energy (free motion)
    prob: ScatteringProblem | None


def _points(cfg: RunConfig) -> list[tuple[float | None, float | None]]:
    if cfg.potential is None:
        return [(None, None)]
    return [(lam, h) for lam in cfg.lambda_grid for h in cfg.h_grid]


def _resolve(cfg: RunConfig, lam: float | None, h: float | None) -> _Point:
    if cfg.potential is None:
        return _Point(None, None, cfg.coins, None)
    prob = ScatteringProblem(cfg.potential, lam=lam, h=h, x_inf=cfg.x_inf, ode_tol=cfg.ode_tol)
    dec = decompose(prob)
    coins = coins_from_potential(prob, dec) if dec.n0 >= 1 else None
    return _Point(lam, h, coins, prob)


# --- per-mode row builders ---------------------------------------------------------


def _rows_coins(cfg: RunConfig, pt: _Point) -> list[list[str]]:
    if pt.coins is None:
        return []
    return [[_f(pt.lam), _f(pt.h), str(n)] + sum((_cplx(z) for z in c.m.ravel()), [])
            for n, c in enumerate(pt.coins.coins, start=1)]


def _rows_evolve(cfg: RunConfig, pt: _Point) -> list[list[str]]:
    if pt.coins is None:
        return []
    psi = WalkState.seed(pt.coins.n0, cfg.side)
    rows = []
    for L in range(cfg.steps + 1):
        if L:
            psi = step(pt.coins, psi)
        rows.append([_f(pt.lam), _f(pt.h), str(L), "-inf", "1"] + _cplx(psi.tail_minus))
        for n in range(1, psi.n0 + 1):
            for comp in (1, 2):
                rows.append([_f(pt.lam), _f(pt.h), str(L), str(n), str(comp)] + _cplx(psi.interior[n - 1, comp - 1]))
        rows.append([_f(pt.lam), _f(pt.h), str(L), "+inf", "2"] + _cplx(psi.tail_plus))
    return rows


def _rows_smatrix(cfg: RunConfig, pt: _Point) -> list[list[str]]:
    routes: dict[str, np.ndarray] = {}
    if pt.coins is None:
        eye = identity_coin().m
        routes = {"stationary": eye, "star": eye, "series": eye}
    else:
        routes["stationary"] = smatrix_stationary(pt.coins).m
        routes["star"] = star_fold(pt.coins.coins).m
        routes["series"] = series_matrix(smatrix_series(pt.coins, tol=cfg.tol, max_L=cfg.max_L, keep_layers=False))
    if pt.prob is not None:
        routes["qm"] = smatrix_qm(pt.prob).m
    mats = list(routes.values())
    dev = max((float(np.abs(a - b).max()) for i, a in enumerate(mats) for b in mats[i + 1:]), default=0.0)
    return [[_f(pt.lam), _f(pt.h), name] + sum((_cplx(z) for z in m.ravel()), []) + [_f(dev)]
            for name, m in routes.items()]


def _rows_paths(cfg: RunConfig, pt: _Point) -> list[list[str]]:
    if pt.coins is None:
        return []
    bound = fit_tail_bound(build_e_matrix(pt.coins))
    rows = []
    for k in (1, 2):
        cum = [0j, 0j]
        for L, lay in enumerate(layers(pt.coins, k), start=1):
            for j in (1, 2):
                cum[j - 1] += lay[j - 1]
                count = len(enumerate_paths(pt.coins, j, k, L, cap=max(PATH_COUNT_MAX, L_ENUM_MAX))) \
                    if L <= PATH_COUNT_MAX else ""
                rows.append([_f(pt.lam), _f(pt.h), str(j), str(k), str(L), str(count)]
                            + _cplx(lay[j - 1]) + _cplx(cum[j - 1]) + [_f(bound(L))])
            if L >= cfg.steps:
                break
    rows.sort(key=lambda r: (r[2], r[3], int(r[4])))
    return rows


def _rows_barriertop(cfg: RunConfig, pt: _Point) -> list[list[str]]:
    text = bt.barrier_top_csv([(pt.lam, pt.h, pt.prob)])
    return list(csv.reader(io.StringIO(text)))[1:]


def _rows_spectrum(cfg: RunConfig, pt: _Point) -> list[list[str]]:
    if pt.coins is None:
        return []
    e = build_e_matrix(pt.coins)
    ev = np.linalg.eigvals(e.matrix)
    ev = ev[np.lexsort((ev.imag, ev.real, -np.abs(ev)))]
    bound = fit_tail_bound(e)
    base = [_f(pt.lam), _f(pt.h)]
    rows = [base + ["eigenvalue", str(i)] + _cplx(z) + [_f(abs(z))] for i, z in enumerate(ev)]
    rho = float(np.abs(ev).max()) if ev.size else 0.0
    rows.append(base + ["rho_E", "0", _f(rho), _f(0.0), _f(rho)])
    rows += [base + ["tail_bound", str(L), _f(bound(L)), _f(0.0), _f(bound(L))] for L in range(1, cfg.steps + 1)]
    return rows


_BUILDERS: dict[str, Callable[[RunConfig, _Point], list[list[str]]]] = {
    "coins": _rows_coins,
    "evolve": _rows_evolve,
    "smatrix": _rows_smatrix,
    "paths": _rows_paths,
    "barriertop": _rows_barriertop,
    "spectrum": _rows_spectrum,
}


def run(cfg: RunConfig) -> Path:
    """Execute ``cfg`` and return the path of the written CSV file."""
    builder = _BUILDERS[cfg.mode]

    def job(point):
        return builder(cfg, _resolve(cfg, *point))

    pts = _points(cfg)
    if cfg.workers > 1 and len(pts) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(job, pts))  # map preserves grid order
    else:
        chunks = [job(p) for p in pts]
    out_dir = Path(cfg.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{cfg.mode}.csv"
    buf = io.StringIO()
    buf.write(f"# config: {cfg.echo()}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADERS[cfg.mode])
    for rows in chunks:
        w.writerows(rows)
    path.write_text(buf.getvalue())
    return path


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="walkscatter", description="Quantum-walk view of 1D Schrodinger scattering.")
    ap.add_argument("--config", required=True, help="JSON file mirroring RunConfig")
    ap.add_argument("--mode", choices=sorted(_BUILDERS), help="override the config mode")
    ap.add_argument("--out", help="output directory")
    ap.add_argument("--tol", type=float, help="path-series tolerance")
    ap.add_argument("--max-L", dest="max_L", type=int, help="cap on the path-series length")
    ap.add_argument("--workers", type=int, help="worker threads over the grid")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = load_config(args.config)
        overrides = {k: getattr(args, k) for k in ("mode", "out", "tol", "max_L", "workers") if getattr(args, k) is not None}
        if overrides:
            cfg = RunConfig.from_dict({**cfg.to_dict(), **overrides})
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        path = run(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (WalkScatterError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    print(path)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
