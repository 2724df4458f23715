"""Truncated Epstein-Hurwitz zeta sums over annular index sets.

    zeta_{rho,N}(s, z0) = sum over rho < |l + z0| < N of |l + z0|^(-s)

The index set is the annulus of radius (rho, N) about -z0 in the integer
lattice (lattice constant 1).  The single-dislocation energy at center z0 in
a lattice of constant a is expressed through zeta_{rho,N}(2, -z0/a).
"""

import math
from dataclasses import dataclass

import numpy as np

from ._reduce import blocked_map, exact_sum
from .lattice import AnnulusRegion, PlanePoint, annulus_members, as_point


def inverse_power_terms(members, offset, s):
    """|l + offset|^(-s) for each row l of ``members``."""
    members = np.asarray(members, dtype=np.int64).reshape(-1, 2)
    u, v = offset
    dx = members[:, 0] + u
    dy = members[:, 1] + v
    q = dx * dx + dy * dy
    if s == 2:
        return 1.0 / q
    return 1.0 / np.power(q, s / 2.0)


def zeta_members(z0, rho, n_outer):
    z0 = as_point(z0)
    return annulus_members(AnnulusRegion(PlanePoint(-z0.x, -z0.y), rho, n_outer, 1.0))


def zeta_sum(members, z0, s, threads=None):
    """Exactly rounded sum of the zeta terms over a given member list."""
    z0 = as_point(z0)
    terms = blocked_map(lambda b: inverse_power_terms(b, (z0.x, z0.y), s), members, threads)
    return exact_sum(terms)


def truncated_zeta(s, z0, rho, n_outer, threads=None):
    if not s > 0:
        raise ValueError("exponent s must be positive")
    return zeta_sum(zeta_members(z0, rho, n_outer), z0, s, threads)


@dataclass(frozen=True)
class ZetaParams:
    s: float
    z0: PlanePoint
    rho: float
    n_outer: float

    def __post_init__(self):
        object.__setattr__(self, "z0", as_point(self.z0))
        if not self.s > 0:
            raise ValueError("exponent s must be positive")
        if not self.rho <= self.n_outer:
            raise ValueError("rho must not exceed n_outer")

    def value(self, threads=None):
        return truncated_zeta(self.s, self.z0, self.rho, self.n_outer, threads)

    def member_count(self):
        return len(zeta_members(self.z0, self.rho, self.n_outer))


def energy_prefactor(a, k_d):
    return k_d * a * a / (8.0 * math.pi ** 2)


def zeta_energy_approx(z0_plane, a, k_d, rho, n_outer, threads=None):
    """Leading-order single-dislocation energy k_d a^2/(8 pi^2) * zeta_{rho,N}(2, -z0/a)."""
    z0 = as_point(z0_plane)
    offset = PlanePoint(-z0.x / a, -z0.y / a)
    return energy_prefactor(a, k_d) * truncated_zeta(2, offset, rho, n_outer, threads)


def shift_invariance_check(z0, m, s, rho, n_outer, rtol=1e-12):
    """True when shifting the offset by ``m`` leaves the truncated sum unchanged."""
    z0 = as_point(z0)
    base = truncated_zeta(s, z0, rho, n_outer)
    moved = truncated_zeta(s, z0.shifted(m[0], m[1]), rho, n_outer)
    scale = max(abs(base), abs(moved))
    if scale == 0.0:
        return True
    return abs(moved - base) <= rtol * scale


def zeta_shift_difference(z0, z0_prime, s, rho, n_outer):
    """zeta(s, z0') - zeta(s, z0) over the same (rho, N); a diagnostic only."""
    return truncated_zeta(s, z0_prime, rho, n_outer) - truncated_zeta(s, z0, rho, n_outer)


def fit_log_slope(n_list, values):
    """Least-squares slope of ``values`` against ln N, with the RMS residual."""
    x = np.log(np.asarray(n_list, dtype=float))
    y = np.asarray(values, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return float(slope), float(np.sqrt(np.mean(resid ** 2)))


def _check_doubling(n_list):
    n = np.asarray(n_list, dtype=float)
    if len(n) < 4:
        raise ValueError("need at least four radii")
    if not np.allclose(n[1:] / n[:-1], 2.0):
        raise ValueError("radii must form a geometric sequence with ratio 2")


def zeta_series(z0, rho, n_list, s=2, threads=None):
    return [truncated_zeta(s, z0, rho, n, threads) for n in n_list]


def log_divergence_fit(z0, rho, n_list, s=2):
    """Slope of zeta_{rho,N}(s, z0) against ln N over a doubling sequence of N.

    For s = 2 the slope tends to 2 pi, the lattice-point density of the
    annulus per unit ln N.  Returns (slope, rms residual).
    """
    _check_doubling(n_list)
    return fit_log_slope(n_list, zeta_series(z0, rho, n_list, s))


def epstein_far_sum(s, z0, rho, n_outer=256):
    """Untruncated sum over rho < |l + z0|, estimated as the truncated sum plus
    the continuum tail 2 pi N^(2-s)/(s-2).  Only defined for s > 2."""
    if not s > 2:
        raise ValueError("the untruncated sum diverges for s <= 2; use truncated_zeta")
    tail = 2.0 * math.pi * n_outer ** (2.0 - s) / (s - 2.0)
    return truncated_zeta(s, z0, rho, n_outer) + tail
