#!/usr/bin/env python3
"""Sweep the deformation parameter and tabulate the low-lying spectrum.

Example:
    python scripts/tau_sweep.py --omega 1.0 --tau-max 0.2 --points 9 -k 4
"""

import argparse
import math

import numpy as np

from gupmdm.core import make_grid
from gupmdm.models import GupOscillatorParams, gup_oscillator_sl
from gupmdm.solver import richardson, solve_sl


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--omega", type=float, default=1.0)
    ap.add_argument("--tau-max", type=float, default=0.2)
    ap.add_argument("--points", type=int, default=9)
    ap.add_argument("-k", type=int, default=4, help="number of levels")
    ap.add_argument("--n", type=int, default=1201)
    args = ap.parse_args()

    pmax = 12.0 / math.sqrt(args.omega)
    g1 = make_grid(-pmax, pmax, args.n)
    g2 = g1.refined()
    header = ["tau"] + [f"E{n}" for n in range(args.k)]
    print("  ".join(f"{h:>12s}" for h in header))
    for tau in np.linspace(0.0, args.tau_max, args.points):
        params = GupOscillatorParams(omega=args.omega, tau=float(tau))
        s1 = solve_sl(gup_oscillator_sl(params, g1), args.k)
        s2 = solve_sl(gup_oscillator_sl(params, g2), args.k)
        energies = [
            params.energy_from_eigenvalue(richardson(float(a), float(b)))
            for a, b in zip(s1.eigenvalues, s2.eigenvalues)
        ]
        print(
            "  ".join([f"{tau:12.5f}"] + [f"{e:12.8f}" for e in energies])
        )


if __name__ == "__main__":
    main()
