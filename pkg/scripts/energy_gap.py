"""Relative gap between the exact spring energy and the zeta approximation
for one SC dislocation, at fixed N/rho and growing rho."""

import argparse
import time

from dislokit import DislocationSet, SpringConstants, exact_energy, zeta_energy_approx
from dislokit.energy import region_for


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rho", type=float, nargs="+", default=[4, 8, 16, 32, 64])
    ap.add_argument("--ratio", type=float, default=8.0, help="N / rho")
    ap.add_argument("--center", type=float, nargs=2, default=[0.5, 0.5])
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()

    dis = DislocationSet(plus=[tuple(args.center)])
    k = SpringConstants()
    print("rho,n_outer,members,exact,zeta_approx,relative_gap,seconds")
    for rho in args.rho:
        n = args.ratio * rho
        t0 = time.perf_counter()
        members = region_for(dis, rho, n, 1.0)
        e = exact_energy(dis, members, 1.0, k, threads=args.threads)
        z = zeta_energy_approx(args.center, 1.0, k.k_d, rho, n, threads=args.threads)
        dt = time.perf_counter() - t0
        print(f"{rho:g},{n:g},{len(members)},{e:.17g},{z:.17g},{abs(e - z) / e:.6e},{dt:.3f}")


if __name__ == "__main__":
    main()
