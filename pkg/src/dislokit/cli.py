"""Command line front end: ``dislokit <command> --config run.json``.

Exit codes: 0 ok, 2 config, 3 center hit, 4 unsupported lattice,
5 hypothesis violated, 6 loop too coarse.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys

from . import energy as en
from . import zeta as zt
from ._reduce import resolve_threads
from .config import load_config
from .errors import ConfigError, DislokitError, UnsupportedLattice
from .fields import (
    DislocationSet,
    generate_bcc_configuration,
    generate_sc_configuration,
    loop_monodromy,
    planar_map_for,
)
from .lattice import AnnulusRegion, LatticeKind, PlanePoint, boundary_near_misses

log = logging.getLogger("dislokit")

COMMANDS = ("generate", "energy", "zeta", "scan", "monodromy")
DEFAULT_FORMAT = {"generate": "csv", "energy": "json", "zeta": "csv", "scan": "csv", "monodromy": "json"}


def _fmt(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return "" if v is None else str(v)


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def to_json(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _records(header, rows):
    return [dict(zip(header, r)) for r in rows]


def _require(section, name):
    if section is None:
        raise ConfigError(f"this command needs a '{name}' section")
    return section


def cmd_generate(cfg, fmt, threads):
    gen = _require(cfg.generation, "generation")
    spec = cfg.lattice
    build = generate_sc_configuration if spec.kind is LatticeKind.SC else generate_bcc_configuration
    conf = build(spec, cfg.dislocations, gen.l_range, gen.height_window)
    header = ("sheet", "l1", "l2", "x", "y", "z")
    rows = conf.rows()
    if fmt == "csv":
        return to_csv(header, rows)
    return to_json({"kind": spec.kind.value, "a": spec.a, "fiber_period": spec.fiber_period,
                    "records": _records(header, rows)})


def _warn_boundary(cfg):
    reg = cfg.region
    dis = cfg.dislocations
    centers = [reg.center] if reg.center is not None else list(dis.plus + dis.minus)
    for c in centers:
        hits = boundary_near_misses(AnnulusRegion(c, reg.rho, reg.n_outer, cfg.lattice.a))
        if hits:
            log.warning("lattice point(s) %s within 1e-9*a of an annulus boundary about (%s, %s); "
                        "membership is sensitive to rounding", hits[:5], c.x, c.y)


def cmd_energy(cfg, fmt, threads):
    if cfg.lattice.kind is not LatticeKind.SC:
        raise UnsupportedLattice("energy is only available for SC lattices")
    reg = _require(cfg.region, "region")
    _warn_boundary(cfg)
    rep = en.energy_report(cfg.dislocations, reg.rho, reg.n_outer, cfg.lattice.a, cfg.springs,
                           reg.center, cfg.lattice.gamma_phase, threads)
    d = rep.to_dict()
    if fmt == "json":
        return to_json(d)
    keys = [k for k in ("exact", "exact_per_length", "zeta_approx", "continuum", "region_size", "relative_gap") if k in d]
    return to_csv(keys, [[d[k] for k in keys]])


def cmd_zeta(cfg, fmt, threads):
    zc = _require(cfg.zeta, "zeta")
    reg = _require(cfg.region, "region")
    z0 = zc.z0
    if z0 is None:
        centers = cfg.dislocations.plus + cfg.dislocations.minus
        if not centers:
            raise ConfigError("zeta: give zeta.z0 or at least one dislocation center")
        a = cfg.lattice.a
        z0 = PlanePoint(-centers[0].x / a, -centers[0].y / a)
    header = ("s", "rho", "n_outer", "value", "member_count")
    rows = []
    for s, n in zc.pairs:
        members = zt.zeta_members(z0, reg.rho, n)
        rows.append((s, reg.rho, n, zt.zeta_sum(members, z0, s, threads), len(members)))
    if fmt == "csv":
        return to_csv(header, rows)
    return to_json({"z0": list(z0), "rows": _records(header, rows)})


def _diff_rows(n_list, values):
    rows = []
    for i, (n, v) in enumerate(zip(n_list, values)):
        diff = values[i] - values[i - 1] if i >= 1 else None
        ratio = None
        if i >= 2 and values[i - 1] != values[i - 2]:
            ratio = diff / (values[i - 1] - values[i - 2])
        rows.append([n, v, diff, ratio])
    return rows


def cmd_scan(cfg, fmt, threads):
    sc = _require(cfg.scan, "scan")
    reg = _require(cfg.region, "region")
    a, k = cfg.lattice.a, cfg.springs
    dis = cfg.dislocations
    summary = {}
    if sc.dipole is not None or dis.is_dipole():
        if sc.dipole is not None:
            table = en.dipole_convergence_scan(sc.dipole[0], sc.dipole[1], reg.rho, a, k.k_d, sc.n_list, threads)
            values = [e for _, e in table]
        else:
            cp, cm = dis.plus[0], dis.minus[0]
            en.check_dipole_hypothesis(math.hypot(cp.x - cm.x, cp.y - cm.y) / 2.0, reg.rho, a)
            values = [en.leading_order_energy(dis, en.region_for(dis, reg.rho, n, a), a, k.k_d, threads)
                      for n in sc.n_list]
        header = ["n_outer", "energy", "difference", "ratio"]
        rows = _diff_rows(sc.n_list, values)
        summary["mode"] = "dipole"
    elif dis.is_single():
        c = dis.plus[0]
        z0 = PlanePoint(-c.x / a, -c.y / a)
        zetas = zt.zeta_series(z0, reg.rho, sc.n_list, 2, threads)
        values = [zt.energy_prefactor(a, k.k_d) * z for z in zetas]
        zeta_slope, zeta_resid = zt.fit_log_slope(sc.n_list, zetas)
        energy_slope, _ = zt.fit_log_slope(sc.n_list, values)
        summary.update(mode="single", zeta_slope=zeta_slope, zeta_residual=zeta_resid,
                       energy_slope=energy_slope, continuum_slope=k.k_d * a * a / (4.0 * math.pi))
        # the fitted slope is repeated on every row so the CSV stays one flat table
        header = ["n_outer", "energy", "difference", "ratio", "zeta", "energy_slope"]
        rows = [r + [z, energy_slope] for r, z in zip(_diff_rows(sc.n_list, values), zetas)]
    else:
        raise ConfigError("scan needs a single positive center, a dipole, or scan.dipole")
    if sc.exact:
        if cfg.lattice.kind is not LatticeKind.SC:
            raise UnsupportedLattice("exact energies are only available for SC lattices")
        if sc.dipole is not None:
            x0, y0 = sc.dipole
            dis = DislocationSet(plus=[(x0, y0)], minus=[(x0, -y0)])
        header.append("exact")
        for r, n in zip(rows, sc.n_list):
            r.append(en.exact_energy(dis, en.region_for(dis, reg.rho, n, a), a, k, cfg.lattice.gamma_phase, threads))
    if fmt == "csv":
        return to_csv(header, rows)
    return to_json({**summary, "rows": _records(header, rows)})


def cmd_monodromy(cfg, fmt, threads):
    loop = _require(cfg.monodromy, "monodromy")
    spec = cfg.lattice
    d = spec.fiber_period
    gain = loop_monodromy(loop, cfg.dislocations, d, planar_map_for(spec), 1e-12 * spec.a)
    w = gain / d
    n = round(w)
    out = {"gain": gain, "fiber_period": d, "winding": int(n), "distance_to_integer": abs(w - n),
           "steps": len(loop.steps) - 1}
    if abs(w - n) >= 1e-6:
        log.warning("winding %r is not within 1e-6 of an integer", w)
    if fmt == "json":
        return to_json(out)
    keys = list(out)
    return to_csv(keys, [[out[k] for k in keys]])


HANDLERS = {
    "generate": cmd_generate,
    "energy": cmd_energy,
    "zeta": cmd_zeta,
    "scan": cmd_scan,
    "monodromy": cmd_monodromy,
}


def build_parser():
    p = argparse.ArgumentParser(prog="dislokit", description="Screw dislocation lattices and spring energies.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--output", help="output file (default: config output.path, else stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--threads", type=int, help="worker threads (default: $DISLOKIT_THREADS or 1)")
    return p


def run(argv=None):
    """Run the CLI and return the exit code."""
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        threads = resolve_threads(args.threads)
        fmt = args.format or cfg.output.format or DEFAULT_FORMAT[args.command]
        text = HANDLERS[args.command](cfg, fmt, threads)
    except DislokitError as exc:
        print(f"dislokit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"dislokit: ConfigError: {exc}", file=sys.stderr)
        return ConfigError.exit_code
    path = args.output or cfg.output.path
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(levelname)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
