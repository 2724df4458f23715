"""Continuum dipole energy against the closed-form far-field bound for a
few separations, at growing outer radius."""

import argparse

from dislokit import continuum_dipole_energy, dipole_far_field_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rho", type=float, default=2.0)
    ap.add_argument("--n", type=float, nargs="+", default=[10, 100, 1000, 10000])
    args = ap.parse_args()
    print("y0,n_outer,energy,bound")
    for y0 in (0.25, 0.5, 0.75):
        bound = dipole_far_field_bound(y0, args.rho - y0, 1.0)
        for n in args.n:
            print(f"{y0},{n:g},{continuum_dipole_energy(0.0, y0, args.rho, n, 1.0):.10g},{bound:.10g}")


if __name__ == "__main__":
    main()
