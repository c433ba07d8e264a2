"""Compare the scattering-matrix routes on the double-Gaussian barrier.

Routes: direct ODE solution, stationary walk states, star product of the coins
and the path series. Prints the largest pairwise entrywise deviation per energy.

    python3 scripts/route_comparison.py --h 0.05 --lam 0.6 0.8 0.95
"""

import argparse
import itertools
import time

import numpy as np

from walkscatter.coin_algebra import star_fold
from walkscatter.path_sum import series_matrix, smatrix_series
from walkscatter.potentials import double_gaussian
from walkscatter.schrodinger import ScatteringProblem, coins_from_potential, smatrix_qm
from walkscatter.walk import build_e_matrix, smatrix_stationary, spectral_radius


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h", type=float, default=0.05)
    ap.add_argument("--lam", type=float, nargs="+", default=[0.6, 0.7, 0.8, 0.9, 0.95])
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--max-L", type=int, default=200_000)
    args = ap.parse_args()
    print(f"{'lam':>6} {'rho_E':>8} {'|s11|^2':>10} {'max_dev':>10} {'seconds':>8}")
    for lam in args.lam:
        t0 = time.perf_counter()
        prob = ScatteringProblem(double_gaussian(), lam=lam, h=args.h)
        c = coins_from_potential(prob)
        routes = {
            "qm": smatrix_qm(prob).m,
            "stationary": smatrix_stationary(c).m,
            "star": star_fold(c.coins).m,
        }
        rho = spectral_radius(build_e_matrix(c))
        try:
            routes["series"] = series_matrix(smatrix_series(c, tol=args.tol, max_L=args.max_L, keep_layers=False))
        except Exception as exc:  # slow convergence close to rho_E = 1
            print(f"  series skipped: {exc}")
        dev = max(np.abs(a - b).max() for a, b in itertools.combinations(routes.values(), 2))
        print(f"{lam:6.3f} {rho:8.5f} {abs(routes['qm'][0, 0]) ** 2:10.3e} {dev:10.2e} {time.perf_counter() - t0:8.2f}")


if __name__ == "__main__":
    main()
