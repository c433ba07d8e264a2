"""Transmission through ``A sech^2(x / w)`` against the closed form.

    python3 scripts/eckart_check.py --A 1 --w 1 --h 0.3
"""

import argparse
import math

import numpy as np

from walkscatter.potentials import PotentialSpec, Sech2
from walkscatter.schrodinger import ScatteringProblem, smatrix_qm


def eckart_transmission(A: float, w: float, lam: float, h: float) -> float:
    k = math.sqrt(lam) / h
    s = 4 * A * w * w / (h * h) - 1
    c = math.cosh(0.5 * math.pi * math.sqrt(s)) ** 2 if s > 0 else math.cos(0.5 * math.pi * math.sqrt(-s)) ** 2
    sh = math.sinh(math.pi * k * w) ** 2
    return sh / (sh + c)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--A", type=float, default=1.0)
    ap.add_argument("--w", type=float, default=1.0)
    ap.add_argument("--h", type=float, default=0.3)
    ap.add_argument("--lam", type=float, nargs="+", default=[0.5, 0.9, 1.1, 1.3, 1.6, 2.0, 3.0])
    args = ap.parse_args()
    print(f"{'lam':>6} {'numeric':>12} {'closed form':>12} {'error':>9}")
    for lam in args.lam:
        S = smatrix_qm(ScatteringProblem(PotentialSpec([Sech2(args.A, 0.0, args.w)]), lam=lam, h=args.h)).m
        num, ref = float(np.abs(S[0, 0]) ** 2), eckart_transmission(args.A, args.w, lam, args.h)
        print(f"{lam:6.3f} {num:12.6e} {ref:12.6e} {abs(num - ref):9.1e}")


if __name__ == "__main__":
    main()
