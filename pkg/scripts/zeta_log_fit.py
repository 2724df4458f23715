"""Slope of the truncated s=2 zeta sum against ln N for several centers.
The slope should approach 2 pi regardless of the center."""

import argparse
import math

from dislokit.zeta import log_divergence_fit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rho", type=float, default=4.0)
    ap.add_argument("--n", type=int, nargs="+", default=[32, 64, 128, 256, 512])
    args = ap.parse_args()
    print("x0,y0,slope,slope_over_2pi,residual")
    for z0 in [(-0.5, -0.5), (0.0, -0.5), (-0.1, -0.3), (-0.25, -0.25)]:
        slope, resid = log_divergence_fit(z0, args.rho, args.n)
        print(f"{z0[0]},{z0[1]},{slope:.8g},{slope / (2 * math.pi):.6f},{resid:.3e}")


if __name__ == "__main__":
    main()
