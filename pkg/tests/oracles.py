"""Independent reference implementations for the tests.

Nothing here imports dislokit.  Everything is plain Python with cmath, written
straight from the defining formulas and summed in reverse order.
"""

import cmath
import math


def members(cx, cy, rho, n, a=1.0):
    """Brute force scan of rho*a < |l*a - c| < n*a over a generous box."""
    out = []
    lo1, hi1 = int(math.floor(cx / a - n)) - 3, int(math.ceil(cx / a + n)) + 3
    lo2, hi2 = int(math.floor(cy / a - n)) - 3, int(math.ceil(cy / a + n)) + 3
    for i in range(lo1, hi1 + 1):
        for j in range(lo2, hi2 + 1):
            r = math.sqrt((i * a - cx) ** 2 + (j * a - cy) ** 2)
            if rho * a < r < n * a:
                out.append((i, j))
    return out


def section(z, plus, minus, gamma=0.0):
    w = cmath.exp(1j * gamma)
    for p in plus:
        u = z - complex(*p)
        w *= u / abs(u)
    for m in minus:
        u = (z - complex(*m)).conjugate()
        w *= u / abs(u)
    return w


def eps(z_from, z_to, plus, minus, a, gamma=0.0):
    """(a/2pi) times the principal phase difference of the section."""
    ph = cmath.phase(section(z_to, plus, minus, gamma)) - cmath.phase(section(z_from, plus, minus, gamma))
    while ph > math.pi:
        ph -= 2 * math.pi
    while ph <= -math.pi:
        ph += 2 * math.pi
    return a * ph / (2 * math.pi)


def site_energy(i, j, plus, minus, a, k_p, k_d, gamma=0.0):
    z = complex(i * a, j * a)
    e1 = eps(z, z + a, plus, minus, a, gamma)
    e2 = eps(z, z + 1j * a, plus, minus, a, gamma)
    ep = eps(z, z + a + 1j * a, plus, minus, a, gamma)
    em = eps(z, z + a - 1j * a, plus, minus, a, gamma)
    r2 = math.sqrt(2.0) * a
    d1 = math.sqrt(a * a + e1 * e1) - a
    d2 = math.sqrt(a * a + e2 * e2) - a
    diag = [
        math.sqrt((a + e1) ** 2 + a * a) - r2,
        math.sqrt((a - e1) ** 2 + a * a) - r2,
        math.sqrt((a + e2) ** 2 + a * a) - r2,
        math.sqrt((a - e2) ** 2 + a * a) - r2,
        math.sqrt(2 * a * a + ep * ep) - r2,
        math.sqrt(2 * a * a + em * em) - r2,
    ]
    return 0.5 * k_p * (d1 * d1 + d2 * d2 + 0.0) + 0.5 * k_d * sum(d * d for d in diag)


def energy(sites, plus, minus, a, k_p=1.0, k_d=1.0, gamma=0.0):
    total = 0.0
    for i, j in reversed(list(sites)):
        total += site_energy(i, j, plus, minus, a, k_p, k_d, gamma)
    return total


def winding(polygon, c):
    """Winding number of a closed polygon around c by signed upward/downward crossings."""
    cx, cy = c
    w = 0
    pts = list(polygon)
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        side = (x1 - x0) * (cy - y0) - (cx - x0) * (y1 - y0)
        if y0 <= cy < y1 and side > 0:
            w += 1
        elif y1 <= cy < y0 and side < 0:
            w -= 1
    return w
