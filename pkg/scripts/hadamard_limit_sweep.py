"""Principal vs numerically exact coins as the energy approaches the barrier top.

For each h the energy is placed at ``V0 - h^2``. Prints the Hadamard deviation of
the principal coins and their distance from the numeric coins (moduli, and
entrywise in the Jost gauge).

    python3 scripts/hadamard_limit_sweep.py [h ...]
"""

import argparse

from walkscatter.barrier_top import barrier_data, coin_deviation, hadamard_deviation, modulus_deviation, principal_coins
from walkscatter.potentials import double_gaussian
from walkscatter.schrodinger import ScatteringProblem, coins_from_potential, decompose


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("h", nargs="*", type=float, default=[0.2, 0.1, 0.05, 0.025, 0.0125])
    args = ap.parse_args()
    V = double_gaussian()
    V0 = barrier_data(ScatteringProblem(V, lam=0.5, h=0.1))[0].V0
    print(f"{'h':>8} {'hadamard_dev':>13} {'modulus_dev':>12} {'entry_dev':>10} {'wronskian':>10}")
    for h in args.h:
        prob = ScatteringProblem(V, lam=V0 - h * h, h=h)
        dec = decompose(prob)
        num = coins_from_potential(prob, dec)
        pc = principal_coins(prob, dec)
        pj = principal_coins(prob, dec, gauge="jost")
        print(f"{h:8.4g} {hadamard_deviation(pc):13.4e} {modulus_deviation(pc, num):12.4e} "
              f"{coin_deviation(pj, num):10.4e} {prob.max_wronskian_drift():10.2e}")


if __name__ == "__main__":
    main()
