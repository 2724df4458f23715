"""Acceptance gate: ten criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or directly
with ``python tests/test_acceptance.py``.  Tolerances are pinned below.
"""

import json
import math
import os
import random
import sys
import time

import numpy as np
import pytest
from scipy.spatial import cKDTree

sys.path.insert(0, os.path.dirname(__file__))
import oracles  # noqa: E402

from dislokit.cli import run  # noqa: E402
from dislokit.energy import (  # noqa: E402
    SpringConstants,
    continuum_dipole_energy,
    dipole_convergence_scan,
    epsilon_arrays,
    epsilon_leading_arrays,
    exact_energy,
    dipole_far_field_bound,
    region_for,
)
from dislokit.fields import DislocationSet, LatticeLoop, generate_bcc_configuration, loop_monodromy  # noqa: E402
from dislokit.lattice import AnnulusRegion, LatticeSpec, PlanePoint, annulus_members, bcc_sheet_height_offset  # noqa: E402
from dislokit.zeta import fit_log_slope, shift_invariance_check, truncated_zeta, zeta_energy_approx  # noqa: E402

GAP_MAX = 0.05
GAP_SECONDS = 10.0
SLOPE_RTOL = 0.10
SLOPE_SECONDS = 60.0
DIVERGE_FRACTION = 0.8
DIPOLE_RATIO_MAX = 0.5
QUAD_RTOL = 1e-6
WINDING_TOL = 1e-9
DECAY_FACTOR = 0.6
SHIFT_RTOL = 1e-12
ORACLE_RTOL = 1e-10
NN_TOL = 1e-12

K1 = SpringConstants(1.0, 1.0)
SINGLE = DislocationSet(plus=[(0.5, 0.5)])


def report(n, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")
    return ok


def criterion_1():
    t0 = time.perf_counter()
    gaps = []
    for rho in (8, 16, 32):
        members = region_for(SINGLE, rho, 8 * rho, 1.0)
        e = exact_energy(SINGLE, members, 1.0, K1, threads=1)
        z = zeta_energy_approx((0.5, 0.5), 1.0, 1.0, rho, 8 * rho, threads=1)
        gaps.append(abs(e - z) / e)
    dt = time.perf_counter() - t0
    ok = gaps[0] > gaps[1] > gaps[2] and gaps[2] < GAP_MAX and dt < GAP_SECONDS
    return report(1, ok, f"gaps {['%.3e' % g for g in gaps]} in {dt:.2f}s")


def criterion_2():
    t0 = time.perf_counter()
    ns = (64, 128, 256, 512)
    e = [exact_energy(SINGLE, region_for(SINGLE, 16, n, 1.0), 1.0, K1) / 1.0 for n in ns]
    slope, _ = fit_log_slope(ns, e)
    target = 1.0 * 1.0 * (K1.k_d / 1.0) / (4 * math.pi)
    dt = time.perf_counter() - t0
    ok = abs(slope - target) <= SLOPE_RTOL * target and dt < SLOPE_SECONDS
    return report(2, ok, f"slope {slope:.6g} vs a^2G/4pi {target:.6g} in {dt:.2f}s")


def criterion_3():
    ns = (64, 128, 256, 512)
    e = [exact_energy(SINGLE, region_for(SINGLE, 16, n, 1.0), 1.0, K1) for n in ns]
    floor = DIVERGE_FRACTION * K1.k_d / (4 * math.pi) * math.log(2)
    single_ok = all(d >= floor for d in np.diff(e))
    table = dipole_convergence_scan(0.0, 0.5, 2.0, 1.0, K1.k_d, [32, 64, 128, 256])
    d = np.diff([v for _, v in table])
    ratios = d[1:] / d[:-1]
    ok = single_ok and bool(np.all(ratios < DIPOLE_RATIO_MAX))
    return report(3, ok, f"single min diff {min(np.diff(e)):.4g} >= {floor:.4g}; dipole ratios {np.round(ratios, 4).tolist()}")


def criterion_4():
    details, ok = [], True
    for y0, rho in ((0.5, 2.0), (1.0, 3.0), (0.75, 2.0)):
        rho_prime = rho - y0  # disk about the midpoint contained in both excluded cores
        val = continuum_dipole_energy(0.0, y0, rho, 1e4, 1.0, rtol=QUAD_RTOL)
        bound = dipole_far_field_bound(y0, rho_prime, 1.0)
        ok &= val <= bound
        details.append(f"y0={y0}: {val:.5g} <= {bound:.5g}")
    return report(4, ok, "; ".join(details))


def _random_loop(rng):
    """Closed lattice walk through random waypoints; may self-intersect."""
    pts = [(rng.randint(-40, 40), rng.randint(-40, 40)) for _ in range(rng.randint(3, 7))]
    pts.append(pts[0])
    steps = [pts[0]]
    for tx, ty in pts[1:]:
        x, y = steps[-1]
        while (x, y) != (tx, ty):
            x += (tx > x) - (tx < x)
            y += (ty > y) - (ty < y)
            steps.append((x, y))
    return steps


def criterion_5():
    rng = random.Random(20240605)
    h = 1.0 / 8.0
    planar = lambda col: PlanePoint(col.l1 * h, col.l2 * h)
    worst, ok, nontrivial = 0.0, True, 0
    for _ in range(100):
        steps = _random_loop(rng)
        if len(steps) < 4:
            steps = [(0, 0), (1, 0), (1, 1), (0, 0)]
        poly = [(x * h, y * h) for x, y in steps]
        centers, wanted = [], rng.randint(1, 5)
        while len(centers) < wanted:
            c = (rng.uniform(-5.5, 5.5), rng.uniform(-5.5, 5.5))
            near = min(math.dist(c, p) for p in poly)
            if near > 0.2 and all(math.dist(c, q) > 1e-6 for q, _ in centers):
                centers.append((c, rng.choice((1, -1))))
        dis = DislocationSet(plus=[c for c, s in centers if s > 0], minus=[c for c, s in centers if s < 0])
        loop = LatticeLoop(tuple((x, y, 0) for x, y in steps))
        gain = loop_monodromy(loop, dis, 1.0, planar)
        want = sum(s * oracles.winding(poly, c) for c, s in centers)
        nontrivial += want != 0
        worst = max(worst, abs(gain - want), abs(gain - round(gain)))
        ok &= abs(gain - want) < WINDING_TOL
    return report(5, ok and nontrivial > 10, f"worst |gain/d - winding| {worst:.2e}, {nontrivial}/100 nonzero")


def criterion_6():
    scaled = []
    for r in (32, 64):
        m = annulus_members(AnnulusRegion((0.5, 0.5), r, r + 1, 1.0))
        ex = epsilon_arrays(m, SINGLE, 1.0)
        lead = epsilon_leading_arrays(m, SINGLE, 1.0)
        dist = np.hypot(m[:, 0] - 0.5, m[:, 1] - 0.5)
        scaled.append(np.max(np.abs(ex - lead) * dist, axis=1))
    factors = scaled[1] / scaled[0]
    return report(6, bool(np.all(factors <= DECAY_FACTOR)), f"decay factors {np.round(factors, 4).tolist()}")


def criterion_7():
    rng = random.Random(7)
    z0 = (-0.3, -0.7)
    shifts = [(rng.randint(-500, 500), rng.randint(-500, 500)) for _ in range(10)]
    base = truncated_zeta(2, z0, 2, 40)
    dev = max(abs(truncated_zeta(2, (z0[0] + m1, z0[1] + m2), 2, 40) - base) / base for m1, m2 in shifts)
    shift_ok = dev < SHIFT_RTOL and all(shift_invariance_check(z0, m, 2, 2, 40, SHIFT_RTOL) for m in shifts)

    dis = DislocationSet(plus=[(0.5, 0.25), (-3.75, 1.125)], minus=[(2.0625, -1.5)])
    members = annulus_members(AnnulusRegion((0.5, 0.25), 6, 30, 1.0))
    e = exact_energy(dis, members, 1.0, K1)
    swap_ok = exact_energy(dis.swapped(), members, 1.0, K1) == e

    trans_ok = True
    for m1, m2 in shifts[:4]:
        moved = annulus_members(AnnulusRegion((0.5 + m1, 0.25 + m2), 6, 30, 1.0))
        trans_ok &= exact_energy(dis.shifted(m1, m2), moved, 1.0, K1) == e
    ok = shift_ok and swap_ok and trans_ok
    return report(7, ok, f"zeta shift dev {dev:.1e}; swap bit-exact {swap_ok}; translation bit-exact {trans_ok}")


def criterion_8():
    rng = random.Random(8)
    worst, ok = 0.0, True
    for _ in range(5):
        first = (rng.uniform(-3, 3), rng.uniform(-3, 3))
        others = [(first[0] + rng.uniform(-1.5, 1.5), first[1] + rng.uniform(-1.5, 1.5)) for _ in range(rng.randint(0, 2))]
        signs = [1] + [rng.choice((1, -1)) for _ in others]
        cs = [first] + others
        plus = [c for c, s in zip(cs, signs) if s > 0]
        minus = [c for c, s in zip(cs, signs) if s < 0]
        k = SpringConstants(rng.uniform(0.5, 2), rng.uniform(0.5, 2))
        dis = DislocationSet(plus=plus, minus=minus)
        members = annulus_members(AnnulusRegion(first, 4, 16, 1.0))
        got = exact_energy(dis, members, 1.0, k)
        want = oracles.energy(oracles.members(first[0], first[1], 4, 16), plus, minus, 1.0, k.k_p, k.k_d)
        rel = abs(got - want) / want
        worst = max(worst, rel)
        ok &= rel < ORACLE_RTOL
    return report(8, ok, f"worst relative deviation {worst:.2e}")


def criterion_9():
    a = 1.0
    spec = LatticeSpec("BCC", a=a)
    d = spec.fiber_period
    conf = generate_bcc_configuration(spec, DislocationSet(), ((-5, 14), (-5, 14)), (-3 * d, 3 * d))
    pos = conf.positions()
    rows = conf.rows()
    tree = cKDTree(pos)
    nn = math.sqrt(3) * a / 2
    worst, ok, count = 0.0, True, 0
    for i, (sheet, l1, l2, _, _, z) in enumerate(rows):
        if not (0 <= l1 < 10 and 0 <= l2 < 10 and abs(z) < d):
            continue
        count += 1
        dist, _ = tree.query(pos[i], k=10)
        shell = dist[1:9]
        worst = max(worst, float(np.max(np.abs(shell - nn))))
        ok &= bool(np.all(np.abs(shell - nn) <= NN_TOL)) and dist[9] > nn + 0.1
    offsets = [bcc_sheet_height_offset(c, a) for c in range(3)]
    exact_offsets = offsets == [0.0, math.sqrt(3) * a / 6, 2 * (math.sqrt(3) * a / 6)]
    exact_offsets &= offsets[2] == pytest.approx(math.sqrt(3) * a / 3, abs=0)
    return report(9, ok and exact_offsets and count > 0,
                  f"{count} interior points, worst NN deviation {worst:.1e}, offsets {offsets}")


def criterion_10(tmp_dir):
    cfg = {"lattice": {"kind": "SC", "a": 1.0},
           "dislocations": {"plus": [[0.5, 0.5]], "minus": [[3.25, -2.75]]},
           "region": {"rho": 8, "n_outer": 120, "center": [0.5, 0.5]}}
    path = os.path.join(tmp_dir, "energy.json")
    with open(path, "w") as fh:
        json.dump(cfg, fh)
    outputs = []
    for t in (1, 2, 8):
        out = os.path.join(tmp_dir, f"out{t}.json")
        code = run(["energy", "--config", path, "--output", out, "--threads", str(t)])
        with open(out, "rb") as fh:
            outputs.append((code, fh.read()))
    ok = all(c == 0 for c, _ in outputs) and len({b for _, b in outputs}) == 1
    return report(10, ok, f"{len(outputs[0][1])} bytes, identical across threads 1/2/8: {ok}")


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n):
    assert globals()[f"criterion_{n}"]()


def test_criterion_10(tmp_path):
    assert criterion_10(str(tmp_path))


if __name__ == "__main__":
    import tempfile

    results = [globals()[f"criterion_{n}"]() for n in range(1, 10)]
    with tempfile.TemporaryDirectory() as tmp:
        results.append(criterion_10(tmp))
    print(f"{sum(results)}/10 criteria passed")
    sys.exit(0 if all(results) else 1)
