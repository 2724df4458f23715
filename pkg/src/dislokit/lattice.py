"""Lattice specifications, SC/BCC embeddings, BCC sheets and annular index sets."""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedLattice

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT6 = math.sqrt(6.0)
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"plane point must be finite, got ({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def shifted(self, dx, dy):
        return PlanePoint(self.x + dx, self.y + dy)


def as_point(p):
    """Coerce a PlanePoint, (x, y) pair or complex number to PlanePoint."""
    if isinstance(p, PlanePoint):
        return p
    if isinstance(p, complex):
        return PlanePoint(p.real, p.imag)
    x, y = p
    return PlanePoint(x, y)


class LatticeKind(str, enum.Enum):
    SC = "SC"
    BCC = "BCC"


@dataclass(frozen=True)
class LatticeSpec:
    kind: LatticeKind
    a: float = 1.0
    delta: tuple = (0.0, 0.0, 0.0)
    gamma_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", LatticeKind(self.kind))
        object.__setattr__(self, "a", float(self.a))
        delta = tuple(float(v) for v in self.delta)
        if len(delta) != 3:
            raise ValueError("delta must have three components")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "gamma_phase", float(self.gamma_phase))
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError(f"lattice constant must be positive, got {self.a}")
        if not 0.0 <= self.gamma_phase < TWO_PI:
            raise ValueError("gamma_phase must lie in [0, 2*pi)")

    @property
    def fiber_period(self):
        """Vertical period d of one column: a for SC, the Burgers length sqrt(3)a/2 for BCC."""
        if self.kind is LatticeKind.SC:
            return self.a
        return SQRT3 * self.a / 2.0


@dataclass(frozen=True, order=True)
class ColumnIndex:
    l1: int
    l2: int
    sheet: int = 0

    def __post_init__(self):
        if self.sheet not in (0, 1, 2):
            raise ValueError(f"sheet index must be 0, 1 or 2, got {self.sheet}")


@dataclass(frozen=True)
class AnnulusRegion:
    center: PlanePoint
    rho: float
    n_outer: float
    a: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.a > 0:
            raise ValueError("a must be positive")
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if not self.n_outer >= self.rho:
            raise ValueError("n_outer must not be smaller than rho")


def sc_lattice_point(l1, l2, l3, spec):
    if spec.kind is not LatticeKind.SC:
        raise UnsupportedLattice("sc_lattice_point needs an SC lattice spec")
    a = spec.a
    d1, d2, d3 = spec.delta
    return (l1 * a + d1, l2 * a + d2, l3 * a + d3)


def bcc_sheet_planar_coords(col, a):
    """Planar image of column ``col`` of the BCC sheet decomposition along (1,1,1).

    Sheet 0 is the triangular lattice spanned by (sqrt2 a, 0) and
    (sqrt2 a/2, sqrt6 a/2); sheets 1 and 2 sit at the centroids of the down-
    and up-pointing triangles, offsets (sqrt2 a/2, -sqrt6 a/6) and
    (sqrt2 a/2, +sqrt6 a/6).
    """
    l1, l2, c = col.l1, col.l2, col.sheet
    x = SQRT2 * l1 * a + SQRT2 * l2 * a / 2.0
    y6 = SQRT6 * l2 * a
    if c == 0:
        return PlanePoint(x, y6 / 2.0)
    x += SQRT2 * a / 2.0
    if c == 1:
        return PlanePoint(x, (y6 - SQRT6 * a / 3.0) / 2.0)
    return PlanePoint(x, (y6 + SQRT6 * a / 3.0) / 2.0)


def bcc_sheet_planar_array(l1, l2, sheet, a):
    """Vectorised ``bcc_sheet_planar_coords`` for integer arrays of one sheet."""
    l1 = np.asarray(l1, dtype=float)
    l2 = np.asarray(l2, dtype=float)
    x = SQRT2 * l1 * a + SQRT2 * l2 * a / 2.0
    y6 = SQRT6 * l2 * a
    if sheet == 0:
        return x, y6 / 2.0
    x = x + SQRT2 * a / 2.0
    if sheet == 1:
        return x, (y6 - SQRT6 * a / 3.0) / 2.0
    return x, (y6 + SQRT6 * a / 3.0) / 2.0


def bcc_sheet_height_offset(c, a):
    if c not in (0, 1, 2):
        raise ValueError(f"sheet index must be 0, 1 or 2, got {c}")
    return c * (SQRT3 * a / 6.0)


def sc_diagonal_sheet_height_offset(c, a):
    """Sheet heights of the SC lattice projected along (1,1,1); interval sqrt(3)a/3.

    Geometry only: no dislocation or energy routine consumes these sheets.
    """
    if c not in (0, 1, 2):
        raise ValueError(f"sheet index must be 0, 1 or 2, got {c}")
    return c * (SQRT3 * a / 3.0)


def _scan_box(center, n_outer, a):
    x0, y0 = center
    r1 = np.arange(math.floor(x0 / a - n_outer) - 1, math.ceil(x0 / a + n_outer) + 2)
    r2 = np.arange(math.floor(y0 / a - n_outer) - 1, math.ceil(y0 / a + n_outer) + 2)
    return r1, r2


def _annulus_mask(g1, g2, center, rho, n_outer, a):
    dx = g1 * a - center.x
    dy = g2 * a - center.y
    r = np.sqrt(dx * dx + dy * dy)
    return (rho * a < r) & (r < n_outer * a)


def _grid(r1, r2):
    g1, g2 = np.meshgrid(r1, r2, indexing="ij")
    return g1.ravel(), g2.ravel()


def annulus_members(region):
    """Integer pairs strictly inside the annulus, as an ``(n, 2)`` int64 array.

    Rows are in lexicographic (l1, l2) order.
    """
    c, a = region.center, region.a
    g1, g2 = _grid(*_scan_box(c, region.n_outer, a))
    mask = _annulus_mask(g1, g2, c, region.rho, region.n_outer, a)
    return np.column_stack([g1[mask], g2[mask]]).astype(np.int64)


def dipole_region_members(center_plus, center_minus, rho, n_outer, a):
    """Intersection of the annuli about both centers, lexicographic order."""
    cp, cm = as_point(center_plus), as_point(center_minus)
    b1p, b2p = _scan_box(cp, n_outer, a)
    b1m, b2m = _scan_box(cm, n_outer, a)
    lo1, hi1 = max(b1p[0], b1m[0]), min(b1p[-1], b1m[-1])
    lo2, hi2 = max(b2p[0], b2m[0]), min(b2p[-1], b2m[-1])
    if lo1 > hi1 or lo2 > hi2:
        return np.zeros((0, 2), dtype=np.int64)
    g1, g2 = _grid(np.arange(lo1, hi1 + 1), np.arange(lo2, hi2 + 1))
    mask = _annulus_mask(g1, g2, cp, rho, n_outer, a) & _annulus_mask(g1, g2, cm, rho, n_outer, a)
    return np.column_stack([g1[mask], g2[mask]]).astype(np.int64)


def boundary_near_misses(region, tol=1e-9):
    """Lattice points within ``tol * a`` of either bounding circle of the annulus."""
    c, a = region.center, region.a
    g1, g2 = _grid(*_scan_box(c, region.n_outer + 1, a))
    r = np.hypot(g1 * a - c.x, g2 * a - c.y)
    near = (np.abs(r - region.rho * a) <= tol * a) | (np.abs(r - region.n_outer * a) <= tol * a)
    return [(int(i), int(j)) for i, j in zip(g1[near], g2[near])]
