#!/usr/bin/env python3
"""Print the momentum-dependent mass and effective-potential profiles.

Example:
    python scripts/profiles.py --model swanson --omega 2 --alpha 0.3 \
        --beta 0.1 --tau 0.1 --energy 1.0
"""

import argparse

from gupmdm.core import make_grid
from gupmdm.models import (
    GupOscillatorParams,
    SwansonParams,
    effective_potential_gup,
    effective_potential_swanson,
    mass_profile_gup,
    mass_profile_swanson,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--model", choices=("gup-oscillator", "swanson"),
                    default="gup-oscillator")
    ap.add_argument("--omega", type=float, default=1.0)
    ap.add_argument("--tau", type=float, default=0.1)
    ap.add_argument("--alpha", type=float, default=0.0)
    ap.add_argument("--beta", type=float, default=0.0)
    ap.add_argument("--energy", type=float, default=0.5)
    ap.add_argument("--pmax", type=float, default=6.0)
    ap.add_argument("--n", type=int, default=25)
    args = ap.parse_args()

    grid = make_grid(-args.pmax, args.pmax, args.n)
    if args.model == "gup-oscillator":
        params = GupOscillatorParams(omega=args.omega, tau=args.tau)
        mass = mass_profile_gup(params, grid)
        veff = effective_potential_gup(params, args.energy, grid)
    else:
        params = SwansonParams(omega=args.omega, alpha=args.alpha,
                               beta=args.beta, tau=args.tau)
        mass = mass_profile_swanson(params, grid)
        veff = effective_potential_swanson(params, args.energy, grid)

    print(f"{'p':>10s}  {'M(p)':>14s}  {'Veff(p)-Lambda':>16s}")
    for p, m, v in zip(grid.points, mass.values, veff.values):
        print(f"{p:10.4f}  {m:14.8f}  {v:16.8f}")


if __name__ == "__main__":
    main()
