"""Energy growth with the outer radius: a single dislocation diverges like
ln N while a dipole converges.  Prints the doubling differences of both."""

import argparse
import math

from dislokit import DislocationSet, dipole_convergence_scan, leading_order_energy
from dislokit.energy import region_for


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--y0", type=float, default=0.5)
    ap.add_argument("--rho", type=float, default=2.0)
    ap.add_argument("--n", type=int, nargs="+", default=[16, 32, 64, 128, 256, 512])
    args = ap.parse_args()

    single = DislocationSet(plus=[(0.0, args.y0)])
    e_single = [leading_order_energy(single, region_for(single, args.rho, n, 1.0), 1.0, 1.0) for n in args.n]
    e_dipole = [e for _, e in dipole_convergence_scan(0.0, args.y0, args.rho, 1.0, 1.0, args.n)]
    print(f"# single-center doubling limit ln2/4pi = {math.log(2) / (4 * math.pi):.6g}")
    print("n_outer,single,single_diff,dipole,dipole_diff,dipole_ratio")
    prev = None
    for i, n in enumerate(args.n):
        sd = e_single[i] - e_single[i - 1] if i else float("nan")
        dd = e_dipole[i] - e_dipole[i - 1] if i else float("nan")
        ratio = dd / prev if prev else float("nan")
        print(f"{n},{e_single[i]:.10g},{sd:.6g},{e_dipole[i]:.10g},{dd:.6g},{ratio:.4f}")
        prev = dd if i else None


if __name__ == "__main__":
    main()
