#!/usr/bin/env python3
"""Factorization demo: extract the superpotential from the numerical ground
state, build the partner problem, and show the one-level spectral shift.

Example:
    python scripts/partner_demo.py --tau 0.05 --pmax 14 --n 3001 -k 5
"""

import argparse

from gupmdm.susy import partner_check


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tau", type=float, default=0.05)
    ap.add_argument("--pmax", type=float, default=14.0)
    ap.add_argument("--n", type=int, default=3001)
    ap.add_argument("-k", type=int, default=5)
    args = ap.parse_args()

    pc = partner_check(args.tau, args.pmax, args.n, k=args.k)
    print(f"tau = {pc.tau}")
    print(f"{'n':>3s}  {'Lambda_n+1':>16s}  {'Lambda_1,n':>16s}  "
          f"{'|shift defect|':>14s}  {'mapped resid':>12s}")
    for n in range(args.k):
        print(
            f"{n:3d}  {pc.lam[n + 1]:16.10f}  {pc.lam_partner[n]:16.10f}  "
            f"{pc.shift_defects[n]:14.3e}  {pc.mapped_residuals[n]:12.3e}"
        )


if __name__ == "__main__":
    main()
