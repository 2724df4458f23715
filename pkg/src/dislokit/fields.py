"""Section phases of parallel screw dislocations, height sets, configurations and monodromy.

A set of parallel screw dislocations with centers z_i (positive) and z_j
(negative) is described by the unit-complex field

    gamma * prod_i (z - z_i)/|z - z_i| * prod_j conj(z - z_j)/|z - z_j|

whose argument, scaled by d/2pi, gives the heights of the atoms above the
planar position z modulo the fiber period d.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._reduce import exact_sum
from .errors import DislocationCenterHit, StepTooCoarse, UnsupportedLattice
from .lattice import (
    TWO_PI,
    ColumnIndex,
    LatticeKind,
    PlanePoint,
    as_point,
    bcc_sheet_planar_array,
    bcc_sheet_planar_coords,
)

EPS_GEOM = 1e-12


def wrap_angle(theta):
    """Map angles into (-pi, pi]. Values already inside are returned untouched."""
    arr = np.asarray(theta, dtype=float)
    k = np.round(arr / TWO_PI)
    out = arr - TWO_PI * k
    out = np.where(out <= -math.pi, out + TWO_PI, out)
    out = np.where(out > math.pi, out - TWO_PI, out)
    if np.ndim(theta) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class DislocationSet:
    plus: tuple = ()
    minus: tuple = ()

    def __post_init__(self):
        plus = tuple(as_point(p) for p in self.plus)
        minus = tuple(as_point(p) for p in self.minus)
        if len(set(plus)) != len(plus) or len(set(minus)) != len(minus):
            raise ValueError("duplicate dislocation centers")
        if set(plus) & set(minus):
            raise ValueError("a center cannot be both positive and negative")
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    def __len__(self):
        return len(self.plus) + len(self.minus)

    @property
    def centers(self):
        """(point, sign) pairs sorted by position.

        The order depends only on where the centers are, so swapping signs
        reproduces the same accumulation order and negates sums exactly.
        """
        pairs = [(p, 1.0) for p in self.plus] + [(p, -1.0) for p in self.minus]
        return sorted(pairs, key=lambda ps: (ps[0].x, ps[0].y))

    def swapped(self):
        return DislocationSet(plus=self.minus, minus=self.plus)

    def shifted(self, dx, dy):
        return DislocationSet(
            plus=[p.shifted(dx, dy) for p in self.plus],
            minus=[p.shifted(dx, dy) for p in self.minus],
        )

    def is_single(self):
        return len(self.plus) == 1 and not self.minus

    def is_dipole(self):
        return len(self.plus) == 1 and len(self.minus) == 1


def _check_clear(xs, ys, dis, eps_geom, labels=None):
    for center, _ in dis.centers:
        r2 = (xs - center.x) ** 2 + (ys - center.y) ** 2
        bad = np.flatnonzero(r2 < eps_geom * eps_geom)
        if bad.size:
            i = int(bad[0])
            site = labels[i] if labels is not None else (float(np.ravel(xs)[i]), float(np.ravel(ys)[i]))
            raise DislocationCenterHit(
                f"site {site} lies on dislocation center ({center.x}, {center.y})",
                center=center,
                site=site,
            )


def section_phases(xs, ys, dis, gamma_phase=0.0, eps_geom=EPS_GEOM, labels=None):
    """Vectorised section phase at planar points, wrapped into (-pi, pi]."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    _check_clear(xs, ys, dis, eps_geom, labels)
    total = np.full(np.broadcast(xs, ys).shape, float(gamma_phase))
    for center, sign in dis.centers:
        total = total + sign * np.arctan2(ys - center.y, xs - center.x)
    return wrap_angle(total)


def section_value(z, dis, gamma_phase=0.0, eps_geom=EPS_GEOM):
    """Argument of the section at planar point ``z``, in (-pi, pi]."""
    z = as_point(z)
    return float(section_phases(np.array([z.x]), np.array([z.y]), dis, gamma_phase, eps_geom)[0])


def height_set(phase, d, window, offset=0.0):
    """All heights h in the closed window with h = offset + d*phase/2pi (mod d), ascending."""
    lo, hi = window
    if not lo < hi:
        raise ValueError("height window must satisfy low < high")
    base = offset + d * phase / TWO_PI
    k_lo = math.floor((lo - base) / d) - 1
    k_hi = math.ceil((hi - base) / d) + 1
    return [h for h in (base + k * d for k in range(k_lo, k_hi + 1)) if lo <= h <= hi]


@dataclass(frozen=True)
class ColumnRecord:
    column: ColumnIndex
    planar: PlanePoint
    phase: float
    heights: tuple


@dataclass
class Configuration:
    points: list
    spec: object
    dislocations: DislocationSet
    height_window: tuple

    def rows(self):
        """(sheet, l1, l2, x, y, z) tuples sorted by (sheet, l1, l2, z)."""
        out = []
        for rec in self.points:
            c = rec.column
            for h in rec.heights:
                out.append((c.sheet, c.l1, c.l2, rec.planar.x, rec.planar.y, h))
        out.sort(key=lambda r: (r[0], r[1], r[2], r[5]))
        return out

    def positions(self):
        return np.array([r[3:] for r in self.rows()], dtype=float).reshape(-1, 3)


def _columns(l_range, sheet=0):
    (a1, b1), (a2, b2) = l_range
    return [ColumnIndex(i, j, sheet) for i in range(a1, b1 + 1) for j in range(a2, b2 + 1)]


def _build(spec, dis, cols, xs, ys, phase_shift, window, eps_geom):
    labels = [(c.sheet, c.l1, c.l2) for c in cols]
    phases = section_phases(xs, ys, dis, spec.gamma_phase + phase_shift, eps_geom, labels)
    d = spec.fiber_period
    recs = []
    for col, x, y, ph in zip(cols, xs, ys, phases):
        hs = height_set(float(ph), d, window, offset=spec.delta[2])
        recs.append(ColumnRecord(col, PlanePoint(x, y), float(ph), tuple(hs)))
    return recs


def generate_sc_configuration(spec, dis, l_range, window, eps_geom=None):
    """Dislocated SC lattice along (0,0,1) over an inclusive box of columns."""
    if spec.kind is not LatticeKind.SC:
        raise UnsupportedLattice("generate_sc_configuration needs an SC lattice spec")
    eps_geom = EPS_GEOM * spec.a if eps_geom is None else eps_geom
    cols = _columns(l_range)
    a, (d1, d2, _) = spec.a, spec.delta
    xs = np.array([c.l1 * a + d1 for c in cols], dtype=float)
    ys = np.array([c.l2 * a + d2 for c in cols], dtype=float)
    recs = _build(spec, dis, cols, xs, ys, 0.0, window, eps_geom)
    return Configuration(recs, spec, dis, tuple(window))


def generate_bcc_configuration(spec, dis, l_range, window, eps_geom=None):
    """Dislocated BCC lattice along (1,1,1): three sheets, period sqrt(3)a/2 per column.

    Sheet c carries the extra phase 2*pi*c/3, which places the undislocated
    sheets at heights delta3 + c*sqrt(3)a/6.
    """
    if spec.kind is not LatticeKind.BCC:
        raise UnsupportedLattice("generate_bcc_configuration needs a BCC lattice spec")
    eps_geom = EPS_GEOM * spec.a if eps_geom is None else eps_geom
    d1, d2, _ = spec.delta
    recs = []
    for c in (0, 1, 2):
        cols = _columns(l_range, c)
        px, py = bcc_sheet_planar_array([k.l1 for k in cols], [k.l2 for k in cols], c, spec.a)
        recs.extend(_build(spec, dis, cols, px + d1, py + d2, c * TWO_PI / 3.0, window, eps_geom))
    return Configuration(recs, spec, dis, tuple(window))


def planar_map_for(spec):
    """ColumnIndex -> PlanePoint for the columns of ``spec`` (offset included)."""
    d1, d2, _ = spec.delta
    a = spec.a
    if spec.kind is LatticeKind.SC:
        return lambda col: PlanePoint(col.l1 * a + d1, col.l2 * a + d2)
    return lambda col: bcc_sheet_planar_coords(col, a).shifted(d1, d2)


@dataclass(frozen=True)
class LatticeLoop:
    steps: tuple

    def __post_init__(self):
        steps = tuple(s if isinstance(s, ColumnIndex) else ColumnIndex(*s) for s in self.steps)
        if len(steps) < 3 or steps[0] != steps[-1]:
            raise ValueError("loop must be closed (last step equal to the first)")
        for p, q in zip(steps, steps[1:]):
            if p.sheet != q.sheet or abs(p.l1 - q.l1) > 1 or abs(p.l2 - q.l2) > 1:
                raise ValueError(f"non-neighbour loop step {p} -> {q}")
        object.__setattr__(self, "steps", steps)


def rectangle_loop(l1_min, l2_min, l1_max, l2_max, sheet=0):
    """Counter-clockwise unit-step cycle around the rectangle of columns."""
    if not (l1_min < l1_max and l2_min < l2_max):
        raise ValueError("rectangle must have positive extent")
    pts = [(i, l2_min) for i in range(l1_min, l1_max)]
    pts += [(l1_max, j) for j in range(l2_min, l2_max)]
    pts += [(i, l2_max) for i in range(l1_max, l1_min, -1)]
    pts += [(l1_min, j) for j in range(l2_max, l2_min, -1)]
    pts.append((l1_min, l2_min))
    return LatticeLoop(tuple(ColumnIndex(i, j, sheet) for i, j in pts))


def _segment_distance(p, q, c):
    vx, vy = q.x - p.x, q.y - p.y
    wx, wy = c.x - p.x, c.y - p.y
    vv = vx * vx + vy * vy
    t = 0.0 if vv == 0 else min(1.0, max(0.0, (wx * vx + wy * vy) / vv))
    return math.hypot(p.x + t * vx - c.x, p.y + t * vy - c.y)


def loop_monodromy(loop, dis, d, planar_map, eps_geom=EPS_GEOM):
    """Height gained by lifting the closed loop through the section.

    Each straight step contributes, per center, the exact change of arg(z - z_k)
    along the segment.  A step whose total phase change reaches pi cannot be
    lifted unambiguously on the lattice and raises StepTooCoarse.
    """
    pts = [as_point(planar_map(s)) for s in loop.steps]
    centers = dis.centers
    changes = []
    for idx, (p, q) in enumerate(zip(pts, pts[1:])):
        total = 0.0
        for c, sign in centers:
            if _segment_distance(p, q, c) <= eps_geom:
                raise DislocationCenterHit(
                    f"loop step {loop.steps[idx]} -> {loop.steps[idx + 1]} passes through center ({c.x}, {c.y})",
                    center=c,
                    site=loop.steps[idx],
                )
            px, py = p.x - c.x, p.y - c.y
            qx, qy = q.x - c.x, q.y - c.y
            total += sign * math.atan2(px * qy - py * qx, px * qx + py * qy)
        if abs(total) >= math.pi:
            raise StepTooCoarse(
                f"phase change {total:.6g} across step {loop.steps[idx]} -> {loop.steps[idx + 1]}; refine the loop",
                step=idx,
            )
        changes.append(total)
    return d * exact_sum(changes) / TWO_PI
