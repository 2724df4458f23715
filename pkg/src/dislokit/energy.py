"""Spring-model elastic energy of screw dislocations in the SC lattice.

Every site (l1, l2) of the region carries ten springs: the two in-plane axis
springs (natural length a, constant k_p), the vertical spring (never
stretched), four vertical-diagonal springs to (l1+1, l2, l3+-1) and
(l1, l2+1, l3+-1), and two in-plane diagonals to (l1+1, l2+-1) (natural
length sqrt(2)a, constant k_d).  Their elongations follow from the relative
height differences eps of neighbouring columns.
"""

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate

from ._reduce import blocked_map, exact_sum
from .errors import DislocationCenterHit, HypothesisViolated
from .fields import EPS_GEOM, DislocationSet, wrap_angle
from .lattice import SQRT2, TWO_PI, AnnulusRegion, annulus_members, as_point, dipole_region_members
from .zeta import energy_prefactor, inverse_power_terms, zeta_energy_approx

# neighbour offsets of eps1, eps2, eps_plus, eps_minus
NEIGHBOURS = ((1, 0), (0, 1), (1, 1), (1, -1))


@dataclass(frozen=True)
class SpringConstants:
    k_p: float = 1.0
    k_d: float = 1.0

    def __post_init__(self):
        if not self.k_p >= 0:
            raise ValueError("k_p must be non-negative")
        if not self.k_d > 0:
            raise ValueError("k_d must be positive")


@dataclass(frozen=True)
class EdgeElongations:
    eps1: float
    eps2: float
    eps_plus: float
    eps_minus: float
    delta1: float
    delta2: float
    delta3: float
    delta_d1p: float
    delta_d1m: float
    delta_d2p: float
    delta_d2m: float
    delta_dp: float
    delta_dm: float


@dataclass
class EnergyReport:
    exact: float
    zeta_approx: float | None
    continuum: float | None
    region_size: int
    params: dict = field(default_factory=dict)

    @property
    def exact_per_length(self):
        return self.exact / self.params["a"]

    @property
    def relative_gap(self):
        if self.zeta_approx is None or self.exact == 0.0:
            return None
        return abs(self.exact - self.zeta_approx) / self.exact

    def to_dict(self):
        out = asdict(self)
        out["exact_per_length"] = self.exact_per_length
        out["relative_gap"] = self.relative_gap
        if self.zeta_approx is None:
            del out["zeta_approx"]
        return out


def _centers_arrays(dis):
    return [(c.x, c.y, s) for c, s in dis.centers]


def _check_sites(xs, ys, members, dis, eps_geom):
    for cx, cy, _ in _centers_arrays(dis):
        r2 = (xs - cx) ** 2 + (ys - cy) ** 2
        bad = np.flatnonzero(r2 < eps_geom * eps_geom)
        if bad.size:
            site = tuple(int(v) for v in members[bad[0]])
            raise DislocationCenterHit(
                f"member {site} or one of its neighbours lies on center ({cx}, {cy})",
                center=(cx, cy),
                site=site,
            )


def epsilon_arrays(members, dis, a, eps_geom=None):
    """Exact eps1, eps2, eps_plus, eps_minus for each member row, shape (4, n).

    eps = (a/2pi) * wrap(sum_k s_k arg((z_n - z_k)/(z_m - z_k))): the phase
    difference of the section between a site m and its neighbour n, taken
    on the branch (-a/2, a/2).  The constant phase gamma cancels identically.
    """
    eps_geom = EPS_GEOM * a if eps_geom is None else eps_geom
    members = np.asarray(members, dtype=np.int64).reshape(-1, 2)
    l1, l2 = members[:, 0], members[:, 1]
    acc = np.zeros((4, len(members)))
    centers = _centers_arrays(dis)
    _check_sites(l1 * a, l2 * a, members, dis, eps_geom)
    for k, (p, q) in enumerate(NEIGHBOURS):
        _check_sites((l1 + p) * a, (l2 + q) * a, members, dis, eps_geom)
    for cx, cy, sign in centers:
        x0 = l1 * a - cx
        y0 = l2 * a - cy
        for k, (p, q) in enumerate(NEIGHBOURS):
            xn = (l1 + p) * a - cx
            yn = (l2 + q) * a - cy
            acc[k] += sign * np.arctan2(x0 * yn - y0 * xn, x0 * xn + y0 * yn)
    return wrap_angle(acc) * (a / TWO_PI)


def edge_epsilons(l1, l2, dis, a, gamma_phase=0.0):
    """(eps1, eps2, eps_plus, eps_minus) at site (l1, l2).

    ``gamma_phase`` is accepted for symmetry with the section routines; it
    drops out of every phase difference.
    """
    e = epsilon_arrays(np.array([[l1, l2]]), dis, a)
    return tuple(float(v) for v in e[:, 0])


def _axis(e, a):
    # sqrt(a^2 + e^2) - a without cancellation
    return e * e / (np.sqrt(a * a + e * e) + a)


def _vertical_diag(e, a):
    # sqrt((a + e)^2 + a^2) - sqrt(2) a
    return (2.0 * a * e + e * e) / (np.sqrt((a + e) ** 2 + a * a) + SQRT2 * a)


def _plane_diag(e, a):
    # sqrt(2 a^2 + e^2) - sqrt(2) a
    return e * e / (np.sqrt(2.0 * a * a + e * e) + SQRT2 * a)


def edge_deltas(eps, a):
    e1, e2, ep, em = (float(v) for v in eps)
    f = lambda fn, e: float(fn(np.float64(e), a))
    return EdgeElongations(
        eps1=e1, eps2=e2, eps_plus=ep, eps_minus=em,
        delta1=f(_axis, e1),
        delta2=f(_axis, e2),
        delta3=0.0,
        delta_d1p=f(_vertical_diag, e1),
        delta_d1m=f(_vertical_diag, -e1),
        delta_d2p=f(_vertical_diag, e2),
        delta_d2m=f(_vertical_diag, -e2),
        delta_dp=f(_plane_diag, ep),
        delta_dm=f(_plane_diag, em),
    )


def _energy_terms(members, dis, a, k, eps_geom):
    e1, e2, ep, em = epsilon_arrays(members, dis, a, eps_geom)
    d1, d2 = _axis(e1, a), _axis(e2, a)
    d1p, d1m = _vertical_diag(e1, a), _vertical_diag(-e1, a)
    d2p, d2m = _vertical_diag(e2, a), _vertical_diag(-e2, a)
    dp, dm = _plane_diag(ep, a), _plane_diag(em, a)
    # +/- partners are added pairwise so that S+ <-> S- swaps give identical terms
    axis = d1 * d1 + d2 * d2
    diag = (d1p * d1p + d1m * d1m) + (d2p * d2p + d2m * d2m) + (dp * dp + dm * dm)
    return 0.5 * k.k_p * axis + 0.5 * k.k_d * diag


def exact_energy(dis, members, a, k, gamma_phase=0.0, threads=None, eps_geom=None):
    """Spring energy of one layer summed over the member sites (exactly rounded sum)."""
    if len(dis) == 0:
        return 0.0
    terms = blocked_map(lambda b: _energy_terms(b, dis, a, k, eps_geom), members, threads)
    return exact_sum(terms)


def epsilon_leading_arrays(members, dis, a):
    """First-order eps from the gradient of the section phase, shape (4, n).

    grad arg(z - z_k) = (-Y, X)/r^2; eps along an edge e is (a/2pi) * a * e . grad.
    """
    members = np.asarray(members, dtype=np.int64).reshape(-1, 2)
    l1, l2 = members[:, 0], members[:, 1]
    gx = np.zeros(len(members))
    gy = np.zeros(len(members))
    for cx, cy, sign in _centers_arrays(dis):
        X = l1 * a - cx
        Y = l2 * a - cy
        r2 = X * X + Y * Y
        if np.any(r2 == 0.0):
            raise DislocationCenterHit(f"a member coincides with center ({cx}, {cy})", center=(cx, cy))
        gx += sign * (-Y / r2)
        gy += sign * (X / r2)
    c = a * a / TWO_PI
    return np.stack([c * gx, c * gy, c * (gx + gy), c * (gx - gy)])


def epsilon_leading_order(l1, l2, dis, a):
    """Leading-order (eps1, eps2, eps_plus, eps_minus) far from the cores.

    ``dis`` may be a DislocationSet or a single center point.  For one center
    with X = l1 a - x0, Y = l2 a - y0, r^2 = X^2 + Y^2:
    eps1 = -(a/2pi) aY/r^2, eps2 = (a/2pi) aX/r^2, eps_pm = (a/2pi) a(+-X - Y)/r^2.
    """
    if not isinstance(dis, DislocationSet):
        dis = DislocationSet(plus=[as_point(dis)])
    e = epsilon_leading_arrays(np.array([[l1, l2]]), dis, a)
    return tuple(float(v) for v in e[:, 0])


def _dipole_terms(members, cp, cm, a):
    members = np.asarray(members, dtype=np.int64).reshape(-1, 2)
    l1, l2 = members[:, 0], members[:, 1]
    sep2 = (cp.x - cm.x) ** 2 + (cp.y - cm.y) ** 2
    rp2 = (l1 * a - cp.x) ** 2 + (l2 * a - cp.y) ** 2
    rm2 = (l1 * a - cm.x) ** 2 + (l2 * a - cm.y) ** 2
    return a * a * sep2 / (rp2 * rm2)


def _gradient_terms(members, dis, a):
    g = epsilon_leading_arrays(members, dis, a)
    c = TWO_PI / (a * a)
    gx, gy = g[0] * c, g[1] * c
    return a * a * (gx * gx + gy * gy)


def leading_order_energy(dis, members, a, k_d, threads=None):
    """k_d a^2/(8 pi^2) times the sum of a^2 |grad phase|^2 over the members.

    One center: the summand is a^2/r^2, evaluated through the zeta kernel.
    Dipole: a^2 |z+ - z-|^2/(r+^2 r-^2), i.e. 4 a^2 y0^2/(r+^2 r-^2) for
    centers (x0, +-y0).
    """
    if len(dis) == 0 or len(members) == 0:
        return 0.0
    if dis.is_single():
        c = dis.plus[0]
        offset = (-c.x / a, -c.y / a)
        fn = lambda b: inverse_power_terms(b, offset, 2)
    elif dis.is_dipole():
        cp, cm = dis.plus[0], dis.minus[0]
        fn = lambda b: _dipole_terms(b, cp, cm, a)
    else:
        fn = lambda b: _gradient_terms(b, dis, a)
    return energy_prefactor(a, k_d) * exact_sum(blocked_map(fn, members, threads))


def dipole_leading_order_energy(x0, y0, members, a, k_d, threads=None):
    """Leading-order energy of the dipole at (x0, +y0) / (x0, -y0); zero when y0 = 0."""
    cp, cm = as_point((x0, y0)), as_point((x0, -y0))
    if len(members) == 0:
        return 0.0
    terms = blocked_map(lambda b: _dipole_terms(b, cp, cm, a), members, threads)
    return energy_prefactor(a, k_d) * exact_sum(terms)


def continuum_annulus_energy(a, G, rho, n_outer):
    """a^2 G/(4 pi) ln(N/rho): continuum screw energy per unit length of the annulus."""
    if not 0 < rho <= n_outer:
        raise ValueError("need 0 < rho <= n_outer")
    return a * a * G / (4.0 * math.pi) * math.log(n_outer / rho)


def check_dipole_hypothesis(y0, rho, a):
    if not rho * a > 2.0 * abs(y0):
        raise HypothesisViolated(f"dipole needs rho*a > 2|y0| (rho*a = {rho * a}, 2|y0| = {2 * abs(y0)})")


def _radial_integral(theta, y0, r_in_sq, r_out_sq):
    """Integral over r of 4 y0^2 r / (d+^2 d-^2) along the ray at angle theta,
    restricted to the part of the ray inside both annuli."""
    st = math.sin(theta)
    lo = hi = None
    for s in (y0 * st, -y0 * st):
        base = s * s - y0 * y0
        r_in = s + math.sqrt(base + r_in_sq)
        r_out = s + math.sqrt(base + r_out_sq)
        lo = r_in if lo is None else max(lo, r_in)
        hi = r_out if hi is None else min(hi, r_out)
    if hi <= lo:
        return 0.0
    u1, u2 = lo * lo, hi * hi
    p = y0 * y0 * math.cos(2.0 * theta)
    s2 = abs(math.sin(2.0 * theta))
    kk = y0 * y0 * (u2 - u1) / (y0 ** 4 * s2 * s2 + (u1 + p) * (u2 + p))
    t = s2 * kk
    if t < 1e-8:
        return 2.0 * kk * (1.0 - t * t / 3.0)
    return 2.0 * math.atan(t) / s2


def continuum_dipole_energy(x0, y0, rho, n_outer, a, prefactor=1.0, rtol=1e-6):
    """prefactor * integral of 4 y0^2/(r+^2 r-^2) over the intersection of the annuli
    (rho a, N a) about (x0, y0) and (x0, -y0).

    Polar coordinates about the midpoint (x0, 0): along each ray the region is a
    single interval and the radial integral has a closed form; the angular
    integral is adaptive.  The integrand is even in theta and symmetric under
    theta -> pi - theta, so only [0, pi/2] is integrated.
    """
    check_dipole_hypothesis(y0, rho, a)
    y0 = abs(float(y0))
    if y0 == 0.0 or n_outer <= rho:
        return 0.0
    r_in_sq, r_out_sq = (rho * a) ** 2, (n_outer * a) ** 2
    val, err = integrate.quad(
        _radial_integral, 0.0, math.pi / 2.0, args=(y0, r_in_sq, r_out_sq),
        epsabs=0.0, epsrel=min(rtol, 1e-10), limit=200,
    )
    if err > rtol * abs(val):
        raise RuntimeError(f"quadrature did not reach rtol={rtol} (estimate {err / abs(val):.2e})")
    return prefactor * 4.0 * val


def dipole_far_field_bound(y0, rho_prime, a, prefactor=1.0):
    """Closed-form upper bound on the dipole continuum energy over any region
    outside the disk of radius rho' a about the midpoint; needs rho' a > |y0|."""
    y0 = abs(y0)
    gap = rho_prime * a - y0
    if not gap > 0:
        raise HypothesisViolated("bound needs rho' a > |y0|")
    return prefactor * 8.0 * math.pi * y0 * y0 * (1.0 / (2.0 * gap ** 2) + y0 / (3.0 * gap ** 3))


def dipole_convergence_scan(x0, y0, rho, a, k_d, n_list, threads=None):
    """[(N, E_N)] leading-order dipole energies over the intersected annuli."""
    check_dipole_hypothesis(y0, rho, a)
    n_list = list(n_list)
    if any(b <= a_ for a_, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly increasing")
    out = []
    for n in n_list:
        members = dipole_region_members((x0, y0), (x0, -y0), rho, n, a)
        out.append((n, dipole_leading_order_energy(x0, y0, members, a, k_d, threads)))
    return out


def region_for(dis, rho, n_outer, a, center=None):
    """Member sites for an energy evaluation and the center(s) describing them.

    A dipole without an explicit center uses the intersection of the two
    annuli; otherwise the annulus about ``center`` (default: first center).
    """
    if center is None and dis.is_dipole():
        cp, cm = dis.plus[0], dis.minus[0]
        return dipole_region_members(cp, cm, rho, n_outer, a)
    if center is None:
        if len(dis) == 0:
            raise ValueError("an empty dislocation set needs an explicit region center")
        center = (dis.plus + dis.minus)[0]
    return annulus_members(AnnulusRegion(as_point(center), rho, n_outer, a))


def energy_report(dis, rho, n_outer, a, springs=SpringConstants(), center=None,
                  gamma_phase=0.0, threads=None):
    """Exact energy, leading-order (zeta) value and continuum reference for one setup.

    The continuum reference uses G = k_d/a and is per unit length, so it
    compares with ``exact / a``.
    """
    dipole = center is None and dis.is_dipole()
    if dipole:
        cp, cm = dis.plus[0], dis.minus[0]
        half_sep = math.hypot(cp.x - cm.x, cp.y - cm.y) / 2.0
        check_dipole_hypothesis(half_sep, rho, a)
    members = region_for(dis, rho, n_outer, a, center)
    exact = exact_energy(dis, members, a, springs, gamma_phase, threads)
    G = springs.k_d / a
    zeta_approx = continuum = None
    if dis.is_single() and (center is None or as_point(center) == dis.plus[0]):
        zeta_approx = zeta_energy_approx(dis.plus[0], a, springs.k_d, rho, n_outer, threads)
        continuum = continuum_annulus_energy(a, G, rho, n_outer)
    elif dipole:
        zeta_approx = leading_order_energy(dis, members, a, springs.k_d, threads)
        # the region is rigid-motion invariant: only the half separation matters
        continuum = continuum_dipole_energy(0.0, half_sep, rho, n_outer, a, energy_prefactor(a, G))
    elif len(dis):
        zeta_approx = leading_order_energy(dis, members, a, springs.k_d, threads)
    params = {
        "rho": rho, "n_outer": n_outer, "a": a, "k_p": springs.k_p, "k_d": springs.k_d,
        "gamma_phase": gamma_phase,
        "plus": [[p.x, p.y] for p in dis.plus], "minus": [[p.x, p.y] for p in dis.minus],
        "center": None if center is None else list(as_point(center)),
        "region": "dipole_intersection" if dipole else "annulus",
    }
    return EnergyReport(exact, zeta_approx, continuum, int(len(members)), params)
